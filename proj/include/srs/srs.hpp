#pragma once

#include "srs/constructions.hpp"
#include "srs/iid.hpp"
#include "srs/io.hpp"
#include "srs/population.hpp"
#include "srs/rational.hpp"
#include "srs/sampler.hpp"
#include "srs/stats.hpp"
