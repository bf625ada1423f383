#pragma once

#include "lgdda/axioms.hpp"
#include "lgdda/error.hpp"
#include "lgdda/formula.hpp"
#include "lgdda/grades.hpp"
#include "lgdda/json_io.hpp"
#include "lgdda/kripke.hpp"
#include "lgdda/oracle.hpp"
#include "lgdda/semantics.hpp"
#include "lgdda/syntax.hpp"
#include "lgdda/tableau.hpp"
#include "lgdda/transforms.hpp"
