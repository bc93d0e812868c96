#pragma once

#include "asq/as_search.hpp"
#include "asq/asconfig.hpp"
#include "asq/geometry.hpp"
#include "asq/gf2.hpp"
#include "asq/group.hpp"
#include "asq/minimal_image.hpp"
#include "asq/parallel.hpp"
#include "asq/perm.hpp"
#include "asq/pipelines.hpp"
#include "asq/pseudoarc.hpp"
#include "asq/quadform.hpp"
#include "asq/subgroups.hpp"
#include "asq/version.hpp"
