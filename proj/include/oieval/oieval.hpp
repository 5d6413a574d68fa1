#pragma once

#include "oieval/analysis.hpp"
#include "oieval/assignment.hpp"
#include "oieval/bag.hpp"
#include "oieval/corpus.hpp"
#include "oieval/counts.hpp"
#include "oieval/distance.hpp"
#include "oieval/evaluate.hpp"
#include "oieval/order_independent.hpp"
#include "oieval/pairwise.hpp"
#include "oieval/random.hpp"
#include "oieval/report.hpp"
#include "oieval/sequential.hpp"
#include "oieval/text.hpp"
