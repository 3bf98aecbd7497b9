#pragma once

// Umbrella header for the cross-response analytics library.

#include "xresp/common.hpp"
#include "xresp/csv.hpp"
#include "xresp/fit.hpp"
#include "xresp/histogram.hpp"
#include "xresp/ingest.hpp"
#include "xresp/io.hpp"
#include "xresp/matrix.hpp"
#include "xresp/noise.hpp"
#include "xresp/parallel.hpp"
#include "xresp/pipeline.hpp"
#include "xresp/records.hpp"
#include "xresp/response.hpp"
#include "xresp/session.hpp"
#include "xresp/signs.hpp"
#include "xresp/synthgen.hpp"
