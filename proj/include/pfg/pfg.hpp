// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pfg/analysis.hpp"
#include "pfg/circuits.hpp"
#include "pfg/errors.hpp"
#include "pfg/gates.hpp"
#include "pfg/io.hpp"
#include "pfg/measured.hpp"
#include "pfg/rng.hpp"
#include "pfg/signal.hpp"
#include "pfg/spectral.hpp"
