#pragma once

#include "lexsim/corpus.hpp"
#include "lexsim/embedding.hpp"
#include "lexsim/errors.hpp"
#include "lexsim/eval.hpp"
#include "lexsim/huffman.hpp"
#include "lexsim/morphy.hpp"
#include "lexsim/reranker.hpp"
#include "lexsim/similarity.hpp"
#include "lexsim/taxonomy.hpp"
