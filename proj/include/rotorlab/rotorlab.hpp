#pragma once

#include "rotorlab/error.hpp"
#include "rotorlab/graph.hpp"
#include "rotorlab/graph_io.hpp"
#include "rotorlab/families.hpp"
#include "rotorlab/rotor.hpp"
#include "rotorlab/walk.hpp"
#include "rotorlab/adversary.hpp"
#include "rotorlab/chain.hpp"
#include "rotorlab/concentration.hpp"
#include "rotorlab/bounds.hpp"
#include "rotorlab/monte_carlo.hpp"
#include "rotorlab/fit.hpp"
#include "rotorlab/report.hpp"
#include "rotorlab/experiments.hpp"
