#pragma once

#include "gdz/errors.hpp"
#include "gdz/linalg.hpp"
#include "gdz/drazin.hpp"
#include "gdz/series.hpp"
#include "gdz/pierce.hpp"
#include "gdz/additive.hpp"
#include "gdz/target.hpp"
#include "gdz/block.hpp"
#include "gdz/casegen.hpp"
