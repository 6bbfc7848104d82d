#pragma once

#include "memstress/cli.hpp"
#include "memstress/energy.hpp"
#include "memstress/errors.hpp"
#include "memstress/fd.hpp"
#include "memstress/flow.hpp"
#include "memstress/geometry.hpp"
#include "memstress/grid.hpp"
#include "memstress/identities.hpp"
#include "memstress/io.hpp"
#include "memstress/stress.hpp"
#include "memstress/surfaces.hpp"
#include "memstress/types.hpp"
#include "memstress/version.hpp"
