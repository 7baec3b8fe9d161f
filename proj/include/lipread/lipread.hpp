#pragma once

#include "lipread/contour.hpp"
#include "lipread/corpus.hpp"
#include "lipread/error.hpp"
#include "lipread/featurepipe.hpp"
#include "lipread/igselect.hpp"
#include "lipread/lexicon.hpp"
#include "lipread/recognizer.hpp"
#include "lipread/shapemodel.hpp"
#include "lipread/transform.hpp"
