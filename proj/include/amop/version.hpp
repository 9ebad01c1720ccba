#pragma once

#define AMOP_VERSION "0.1.0"
