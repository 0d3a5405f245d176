#pragma once

#include "ontodex/context_relevance.hpp"
#include "ontodex/corpus.hpp"
#include "ontodex/error.hpp"
#include "ontodex/index_io.hpp"
#include "ontodex/ontology.hpp"
#include "ontodex/text_metrics.hpp"
#include "ontodex/topic_indexer.hpp"
