#ifndef CHIRALPOINT_CHIRALPOINT_HPP
#define CHIRALPOINT_CHIRALPOINT_HPP

#include "chiralpoint/config.hpp"
#include "chiralpoint/dynamics.hpp"
#include "chiralpoint/errors.hpp"
#include "chiralpoint/export.hpp"
#include "chiralpoint/fit.hpp"
#include "chiralpoint/generator.hpp"
#include "chiralpoint/params.hpp"
#include "chiralpoint/response.hpp"
#include "chiralpoint/scatter.hpp"
#include "chiralpoint/spectrum.hpp"
#include "chiralpoint/sweep.hpp"
#include "chiralpoint/units.hpp"
#include "chiralpoint/yield.hpp"

#endif
