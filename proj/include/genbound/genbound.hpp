// Convenience umbrella: pulls in the whole library.

#pragma once

#include "genbound/version.hpp"
#include "genbound/errors.hpp"
#include "genbound/special.hpp"
#include "genbound/rng.hpp"
#include "genbound/core.hpp"
#include "genbound/models.hpp"
#include "genbound/bounds.hpp"
#include "genbound/conditions.hpp"
#include "genbound/mi.hpp"
#include "genbound/fitting.hpp"
#include "genbound/mc.hpp"
#include "genbound/config.hpp"
#include "genbound/io.hpp"
