#pragma once

#include "kapteyn/bigrational.hpp"
#include "kapteyn/catalog.hpp"
#include "kapteyn/errors.hpp"
#include "kapteyn/exact.hpp"
#include "kapteyn/specfun.hpp"
#include "kapteyn/summation.hpp"
