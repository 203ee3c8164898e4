#pragma once

#define KTUPLE_VERSION "0.1.0"
