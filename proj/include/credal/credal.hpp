#pragma once

#include "credal/bounds.hpp"
#include "credal/chi2_ball.hpp"
#include "credal/core.hpp"
#include "credal/oracle.hpp"
#include "credal/radius.hpp"
#include "credal/tv_ball.hpp"
