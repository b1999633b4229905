#pragma once

#include "fraudscope/calendar.hpp"
#include "fraudscope/digest.hpp"
#include "fraudscope/error.hpp"
#include "fraudscope/event.hpp"
#include "fraudscope/ingest.hpp"
#include "fraudscope/periodicity.hpp"
#include "fraudscope/ranking.hpp"
#include "fraudscope/rational.hpp"
#include "fraudscope/render/export.hpp"
#include "fraudscope/render/filters.hpp"
#include "fraudscope/render/frames.hpp"
#include "fraudscope/render/json.hpp"
#include "fraudscope/render/layered.hpp"
#include "fraudscope/render/saved.hpp"
#include "fraudscope/render/spiral.hpp"
#include "fraudscope/render/stacked_bar.hpp"
#include "fraudscope/render/svg.hpp"
#include "fraudscope/render/timeline.hpp"
#include "fraudscope/service/api.hpp"
#include "fraudscope/service/query.hpp"
#include "fraudscope/service/session.hpp"
#include "fraudscope/store.hpp"
#include "fraudscope/time.hpp"
