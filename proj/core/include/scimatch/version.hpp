#pragma once

#define SCIMATCH_VERSION_MAJOR 0
#define SCIMATCH_VERSION_MINOR 1
#define SCIMATCH_VERSION_PATCH 0
#define SCIMATCH_VERSION "0.1.0"
