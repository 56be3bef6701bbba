#pragma once

#include "otslab/audit.hpp"
#include "otslab/bench.hpp"
#include "otslab/errors.hpp"
#include "otslab/hashchain.hpp"
#include "otslab/hex.hpp"
#include "otslab/keystore.hpp"
#include "otslab/lcg.hpp"
#include "otslab/prngots.hpp"
