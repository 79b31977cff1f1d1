#include "mplab/grid.hpp"
