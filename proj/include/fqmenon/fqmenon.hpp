#pragma once

#include "fqmenon/chars.hpp"
#include "fqmenon/errors.hpp"
#include "fqmenon/gf.hpp"
#include "fqmenon/identity.hpp"
#include "fqmenon/multfunc.hpp"
#include "fqmenon/poly.hpp"
#include "fqmenon/report.hpp"
#include "fqmenon/residue_ring.hpp"
#include "fqmenon/scalar.hpp"
#include "fqmenon/suites.hpp"
