#pragma once

#define LIFPOCS_VERSION "0.1.0"
