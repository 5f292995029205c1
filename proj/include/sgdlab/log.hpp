#ifndef SGDLAB_LOG_HPP_
#define SGDLAB_LOG_HPP_

#include <iostream>
#include <string>

namespace sgdlab {

// Warnings go to stderr unless silenced (tests and byte-stable pipelines).
void warn(const std::string& message);
void set_quiet(bool quiet);

}  // namespace sgdlab

#endif  // SGDLAB_LOG_HPP_
