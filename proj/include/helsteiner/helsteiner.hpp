#pragma once

#include "elastic.hpp"
#include "geometry.hpp"
#include "helix.hpp"
#include "network.hpp"
#include "optimize.hpp"
#include "oracle.hpp"
#include "srf.hpp"
#include "version.hpp"
