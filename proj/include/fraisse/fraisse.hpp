#pragma once

#include "fraisse/structure.hpp"
#include "fraisse/io.hpp"
#include "fraisse/budget.hpp"
#include "fraisse/embedding.hpp"
#include "fraisse/canon.hpp"
#include "fraisse/age.hpp"
#include "fraisse/completion.hpp"
#include "fraisse/enumerate.hpp"
#include "fraisse/amalgamation.hpp"
#include "fraisse/patterns.hpp"
#include "fraisse/groups.hpp"
#include "fraisse/stability.hpp"
#include "fraisse/coloring.hpp"
#include "fraisse/lp.hpp"
#include "fraisse/arrows.hpp"
#include "fraisse/definable.hpp"
#include "fraisse/proximal.hpp"
#include "fraisse/convex.hpp"
#include "fraisse/verify.hpp"
