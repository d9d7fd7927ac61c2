#pragma once

#include "pnorm/eig.hpp"
#include "pnorm/elempn.hpp"
#include "pnorm/errors.hpp"
#include "pnorm/fastpn.hpp"
#include "pnorm/feature_block.hpp"
#include "pnorm/gradcheck.hpp"
#include "pnorm/hdp.hpp"
#include "pnorm/io.hpp"
#include "pnorm/lambert.hpp"
#include "pnorm/pn_config.hpp"
#include "pnorm/rng.hpp"
#include "pnorm/sop.hpp"
#include "pnorm/specpn.hpp"
#include "pnorm/sym_matrix.hpp"
