#pragma once

#include "cctl/cctlv.hpp"
#include "cctl/counting.hpp"
#include "cctl/ctl.hpp"
#include "cctl/dks.hpp"
#include "cctl/formula.hpp"
#include "cctl/fragment.hpp"
#include "cctl/model.hpp"
#include "cctl/parser.hpp"
#include "cctl/pm.hpp"
#include "cctl/router.hpp"
#include "cctl/satisfiability.hpp"
#include "cctl/tableau.hpp"
#include "cctl/translate.hpp"
#include "cctl/vars.hpp"
#include "cctl/harness/generators.hpp"
#include "cctl/harness/oracle.hpp"
#include "cctl/harness/random.hpp"
