#ifndef TOPOCUBE_VERSION_HPP
#define TOPOCUBE_VERSION_HPP

#define TOPOCUBE_VERSION "0.1.0"

#endif
