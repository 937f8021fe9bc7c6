#pragma once

#include "nwn/classify.hpp"
#include "nwn/corpus.hpp"
#include "nwn/dataset.hpp"
#include "nwn/error.hpp"
#include "nwn/eval.hpp"
#include "nwn/forest.hpp"
#include "nwn/model_io.hpp"
#include "nwn/naive_bayes.hpp"
#include "nwn/parallel.hpp"
#include "nwn/preprocess.hpp"
#include "nwn/sparse.hpp"
#include "nwn/stopwords.hpp"
#include "nwn/svm.hpp"
#include "nwn/utf8.hpp"
#include "nwn/vectorize.hpp"
