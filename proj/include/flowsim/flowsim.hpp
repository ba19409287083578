#pragma once

#include "flowsim/acceptance.hpp"
#include "flowsim/bench.hpp"
#include "flowsim/checksum.hpp"
#include "flowsim/config.hpp"
#include "flowsim/event_queue.hpp"
#include "flowsim/experiment.hpp"
#include "flowsim/five_tuple.hpp"
#include "flowsim/flow_table.hpp"
#include "flowsim/io.hpp"
#include "flowsim/metrics.hpp"
#include "flowsim/packet.hpp"
#include "flowsim/packet_header.hpp"
#include "flowsim/report.hpp"
#include "flowsim/routing.hpp"
#include "flowsim/rng.hpp"
#include "flowsim/sim_time.hpp"
#include "flowsim/simulation.hpp"
#include "flowsim/splitter.hpp"
#include "flowsim/svg.hpp"
#include "flowsim/tunnel.hpp"
#include "flowsim/workload.hpp"
