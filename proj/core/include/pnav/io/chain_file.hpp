#pragma once

#include <string>

#include "pnav/robot.hpp"

namespace pnav::io {

/// Chain description text format, one entry per line:
///   joint <ax> <ay> <az>  <ox> <oy> <oz>  [qw qx qy qz]
///   tcp   <qw> <qx> <qy> <qz>  <tx> <ty> <tz>
/// Axes are unit vectors, offsets in mm, optional quaternion is the
/// zero-pose rotation. '#' starts a comment. The tcp line is optional
/// (identity TCP offset when absent).
robot::KinematicChain parse_chain(const std::string& text);
robot::KinematicChain load_chain(const std::string& path);

std::string chain_to_text(const robot::KinematicChain& chain);

}  // namespace pnav::io
