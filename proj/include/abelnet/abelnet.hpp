#pragma once

#include "abelnet/core.hpp"
#include "abelnet/zoo.hpp"
#include "abelnet/algebra.hpp"
#include "abelnet/recurrence.hpp"
#include "abelnet/dynamics.hpp"
#include "abelnet/enumeration.hpp"
#include "abelnet/io.hpp"
