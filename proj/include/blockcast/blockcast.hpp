#pragma once

// Umbrella header.

#include "blockcast/broadcast.hpp"
#include "blockcast/channel.hpp"
#include "blockcast/density_evolution.hpp"
#include "blockcast/dynamics.hpp"
#include "blockcast/exact_oracle.hpp"
#include "blockcast/io.hpp"
#include "blockcast/lemma_checks.hpp"
#include "blockcast/tree.hpp"
