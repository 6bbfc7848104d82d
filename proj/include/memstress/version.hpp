#pragma once

#define MEMSTRESS_VERSION "0.1.0"
