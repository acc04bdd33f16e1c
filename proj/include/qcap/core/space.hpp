// Copyright 2026 The qcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "qcap/core/error.hpp"

namespace qcap {

struct Subsystem {
  std::string label;
  std::size_t dim = 1;

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

/// Ordered list of labeled tensor factors. Composite indices are row-major:
/// the first subsystem is the most significant digit.
class TensorSpace {
 public:
  TensorSpace() = default;

  explicit TensorSpace(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i].dim < 1) {
        throw DimensionError("subsystem '" + parts_[i].label + "' has dimension 0");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (parts_[j].label == parts_[i].label) {
          throw LabelError("duplicate subsystem label '" + parts_[i].label + "'");
        }
      }
    }
  }

  TensorSpace(std::initializer_list<Subsystem> parts)
      : TensorSpace(std::vector<Subsystem>(parts)) {}

  /// Single subsystem.
  TensorSpace(std::string label, std::size_t dim)
      : TensorSpace(std::vector<Subsystem>{{std::move(label), dim}}) {}

  const std::vector<Subsystem>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  const Subsystem& operator[](std::size_t i) const { return parts_[i]; }

  std::size_t dim() const {
    std::size_t d = 1;
    for (const auto& p : parts_) d *= p.dim;
    return d;
  }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    d.reserve(parts_.size());
    for (const auto& p : parts_) d.push_back(p.dim);
    return d;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> l;
    l.reserve(parts_.size());
    for (const auto& p : parts_) l.push_back(p.label);
    return l;
  }

  bool contains(const std::string& label) const {
    for (const auto& p : parts_) {
      if (p.label == label) return true;
    }
    return false;
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i].label == label) return i;
    }
    throw LabelError("unknown subsystem label '" + label + "'");
  }

  std::size_t dim_of(const std::string& label) const { return parts_[index_of(label)].dim; }

  /// Product dimension of a label set.
  std::size_t dim_of(const std::vector<std::string>& labels) const {
    std::size_t d = 1;
    for (const auto& l : labels) d *= dim_of(l);
    return d;
  }

  /// Concatenation; throws LabelError on a label collision.
  TensorSpace concat(const TensorSpace& other) const {
    std::vector<Subsystem> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return TensorSpace(std::move(all));
  }

  /// Subsystems whose labels appear in `keep`, in this space's order.
  TensorSpace restrict_to(const std::vector<std::string>& keep) const {
    for (const auto& k : keep) (void)index_of(k);
    std::vector<Subsystem> out;
    for (const auto& p : parts_) {
      for (const auto& k : keep) {
        if (k == p.label) {
          out.push_back(p);
          break;
        }
      }
    }
    return TensorSpace(std::move(out));
  }

  TensorSpace with_dim(const std::string& label, std::size_t dim) const {
    std::vector<Subsystem> out = parts_;
    out[index_of(label)].dim = dim;
    return TensorSpace(std::move(out));
  }

  TensorSpace relabeled(const std::string& from, const std::string& to) const {
    std::vector<Subsystem> out = parts_;
    out[index_of(from)].label = to;
    return TensorSpace(std::move(out));
  }

  friend bool operator==(const TensorSpace&, const TensorSpace&) = default;

 private:
  std::vector<Subsystem> parts_;
};

}  // namespace qcap
