#pragma once

#define ODBA_VERSION "0.1.0"
