#pragma once

// Single point of configuration for the vendored httplib header so every
// translation unit sees identical macros (ODR). Include this, never
// <httplib.h> directly.

#define CPPHTTPLIB_OPENSSL_SUPPORT

#ifdef CPPHTTPLIB_REDIRECT_MAX_COUNT
#undef CPPHTTPLIB_REDIRECT_MAX_COUNT
#endif
#define CPPHTTPLIB_REDIRECT_MAX_COUNT 5

#include <httplib.h>
