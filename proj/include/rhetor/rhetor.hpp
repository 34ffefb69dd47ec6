#ifndef RHETOR_RHETOR_HPP
#define RHETOR_RHETOR_HPP

#include "rhetor/abstractor.hpp"
#include "rhetor/catalog.hpp"
#include "rhetor/error.hpp"
#include "rhetor/eval.hpp"
#include "rhetor/parser.hpp"
#include "rhetor/pipeline.hpp"
#include "rhetor/text.hpp"
#include "rhetor/tree.hpp"

#endif
