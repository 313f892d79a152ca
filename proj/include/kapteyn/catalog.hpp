#pragma once

#include "kapteyn/catalog/identities.hpp"
#include "kapteyn/catalog/negative_q.hpp"
#include "kapteyn/catalog/nielsen.hpp"
#include "kapteyn/catalog/positive_q.hpp"
