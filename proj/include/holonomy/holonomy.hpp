#pragma once

#include "holonomy/catalog.hpp"
#include "holonomy/cech.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/mesh_builders.hpp"
#include "holonomy/parallel.hpp"
#include "holonomy/path_partition.hpp"
#include "holonomy/phase.hpp"
#include "holonomy/quadrature.hpp"
#include "holonomy/rng.hpp"
#include "holonomy/suites.hpp"
#include "holonomy/surface_mesh.hpp"
#include "holonomy/transport_bundle.hpp"
#include "holonomy/transport_gerbe.hpp"
#include "holonomy/vec.hpp"
#include "holonomy/volume.hpp"
