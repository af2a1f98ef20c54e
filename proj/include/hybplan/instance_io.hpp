#pragma once

#include "hybplan/domains.hpp"

#include <iosfwd>
#include <string>

namespace hybplan {

// Line-oriented text format, one instance per file:
//   <domain> <grid> <seed>
//   occupied: x,y x,y ...
//   legs: x,y,a x,y,a x,y,a x,y,a      (locomotion; a = 1 attached)
//   cm: x,y                            (locomotion)
//   bases: x,y x,y                     (manipulation)
//   payloads: e1x,e1y,e2x,e2y ...      (manipulation)
//   goal: x,y | one 4-tuple per payload
//   params: reach=... horizon=...      | link_len=... sweep=... horizon=...
// print(parse(text)) == text for files produced by print.
std::string print_instance(const Instance&);
Instance parse_instance(std::istream&); // throws ParseError with line number
Instance parse_instance_text(const std::string&);
Instance load_instance_file(const std::string& path);
void save_instance_file(const std::string& path, const Instance&);

// canonical shortest text for a double ("2.5", "6", ...)
std::string format_double(double);

} // namespace hybplan
