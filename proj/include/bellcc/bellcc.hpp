#pragma once

#include "bellcc/catalog.hpp"
#include "bellcc/ccp.hpp"
#include "bellcc/classical.hpp"
#include "bellcc/errors.hpp"
#include "bellcc/fourier.hpp"
#include "bellcc/functional.hpp"
#include "bellcc/io.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/modular.hpp"
#include "bellcc/ptm.hpp"
#include "bellcc/quantum.hpp"
#include "bellcc/random.hpp"
#include "bellcc/report.hpp"
