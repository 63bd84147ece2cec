#include "bo/errors.hpp"

#include <iostream>
#include <mutex>

namespace bo {
namespace {

std::mutex sink_mutex;

WarningSink& sink_slot() {
  static WarningSink sink = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
  return sink;
}

}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(sink_mutex);
  WarningSink old = std::move(sink_slot());
  sink_slot() = std::move(sink);
  return old;
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(sink_mutex);
  if (sink_slot()) sink_slot()(message);
}

}  // namespace bo
