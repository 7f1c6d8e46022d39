#pragma once

// Umbrella header. The HTTP pieces (remote.hpp, service.hpp) pull in
// cpp-httplib and are included here as well.

#include "gradient/classifier.hpp"
#include "gradient/corpus.hpp"
#include "gradient/error.hpp"
#include "gradient/eval.hpp"
#include "gradient/generator.hpp"
#include "gradient/graph.hpp"
#include "gradient/metrics.hpp"
#include "gradient/porter.hpp"
#include "gradient/prefix.hpp"
#include "gradient/remote.hpp"
#include "gradient/service.hpp"
#include "gradient/taxonomy.hpp"
