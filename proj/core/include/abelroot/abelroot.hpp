#pragma once

#include "abelroot/errors.hpp"
#include "abelroot/group.hpp"
#include "abelroot/integer.hpp"
#include "abelroot/op_counter.hpp"
#include "abelroot/oracle.hpp"
#include "abelroot/root_extraction.hpp"
