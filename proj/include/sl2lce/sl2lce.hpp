#pragma once

#include "field.hpp"
#include "lie.hpp"
#include "fingrp.hpp"
#include "shalika.hpp"
#include "reps.hpp"
#include "tables.hpp"
