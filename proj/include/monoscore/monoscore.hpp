#pragma once

#include "monoscore/error.hpp"
#include "monoscore/io.hpp"
#include "monoscore/linalg.hpp"
#include "monoscore/measures.hpp"
#include "monoscore/monogamy.hpp"
#include "monoscore/montecarlo.hpp"
#include "monoscore/states.hpp"
#include "monoscore/version.hpp"
