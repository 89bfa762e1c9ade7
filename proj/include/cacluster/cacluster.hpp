#pragma once

#include "cacluster/bit_string.hpp"
#include "cacluster/ca_core.hpp"
#include "cacluster/catalog.hpp"
#include "cacluster/clustering.hpp"
#include "cacluster/digest.hpp"
#include "cacluster/encoding.hpp"
#include "cacluster/error.hpp"
#include "cacluster/io.hpp"
#include "cacluster/metrics.hpp"
#include "cacluster/parallel.hpp"
#include "cacluster/rule_analysis.hpp"
#include "cacluster/search.hpp"
#include "cacluster/state_store.hpp"
