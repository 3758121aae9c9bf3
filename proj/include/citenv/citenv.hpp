#pragma once

// Core library. The HTTP layer lives in citenv/service.hpp.
#include "citenv/environment.hpp"
#include "citenv/errors.hpp"
#include "citenv/factors.hpp"
#include "citenv/impact.hpp"
#include "citenv/journal_store.hpp"
#include "citenv/layout.hpp"
#include "citenv/netio.hpp"
#include "citenv/pipeline.hpp"
#include "citenv/similarity.hpp"
