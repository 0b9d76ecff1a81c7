#pragma once

#include "powerfact/c0_line.hpp"
#include "powerfact/certificate.hpp"
#include "powerfact/chain.hpp"
#include "powerfact/config.hpp"
#include "powerfact/engine.hpp"
#include "powerfact/envelope.hpp"
#include "powerfact/errors.hpp"
#include "powerfact/eventually_constant_line.hpp"
#include "powerfact/grid_function.hpp"
#include "powerfact/identity_net.hpp"
#include "powerfact/inverse_witness.hpp"
#include "powerfact/json_io.hpp"
#include "powerfact/lifted_module.hpp"
#include "powerfact/matrix_algebra.hpp"
#include "powerfact/pyramid.hpp"
#include "powerfact/representation.hpp"
#include "powerfact/scalar.hpp"
#include "powerfact/series.hpp"
#include "powerfact/thresholds.hpp"
#include "powerfact/unitization.hpp"
#include "powerfact/version.hpp"
#include "powerfact/witnesses.hpp"
#include "powerfact/worked_example.hpp"
