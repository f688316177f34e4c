#pragma once

#include "grushin/core.hpp"
#include "grushin/curvature.hpp"
#include "grushin/cutlocus.hpp"
#include "grushin/distance.hpp"
#include "grushin/errors.hpp"
#include "grushin/gluing.hpp"
#include "grushin/mcp.hpp"
