#pragma once

#include "lnd/rational.hpp"
#include "lnd/errors.hpp"
#include "lnd/poly.hpp"
#include "lnd/gcd.hpp"
#include "lnd/linalg.hpp"
#include "lnd/parse.hpp"
#include "lnd/derivation.hpp"
#include "lnd/automorphism.hpp"
#include "lnd/unipotent.hpp"
#include "lnd/kernel.hpp"
#include "lnd/delta_family.hpp"
#include "lnd/quotient_geometry.hpp"
#include "lnd/groupmodel.hpp"
#include "lnd/random.hpp"
#include "lnd/corpus.hpp"
