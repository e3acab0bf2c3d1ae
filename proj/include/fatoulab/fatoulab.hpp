#pragma once

#include "acceptance.hpp"
#include "config.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "gaps.hpp"
#include "growth.hpp"
#include "json_writer.hpp"
#include "leveled_real.hpp"
#include "log_scalar.hpp"
#include "parallel.hpp"
#include "report_io.hpp"
#include "sequences.hpp"
#include "series.hpp"
#include "version.hpp"
