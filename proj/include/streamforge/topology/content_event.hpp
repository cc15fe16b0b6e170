// Copyright 2026 The StreamForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>

namespace streamforge {

namespace detail {

struct PayloadOps {
  void (*copy)(void* dst, const void* src);
  void (*move)(void* dst, void* src) noexcept;
  void (*destroy)(void* obj) noexcept;
};

inline constexpr std::size_t kInlinePayload = 48;

template <class T>
inline constexpr bool kStoredInline =
    sizeof(T) <= kInlinePayload && alignof(T) <= alignof(std::max_align_t) &&
    std::is_nothrow_move_constructible_v<T>;

/// Inline types are stored as T; larger ones as shared_ptr<const T>.
template <class T>
using Stored = std::conditional_t<kStoredInline<T>, T, std::shared_ptr<const T>>;

template <class T>
inline constexpr PayloadOps kOps{
    [](void* dst, const void* src) { new (dst) Stored<T>(*static_cast<const Stored<T>*>(src)); },
    [](void* dst, void* src) noexcept {
      new (dst) Stored<T>(std::move(*static_cast<Stored<T>*>(src)));
    },
    [](void* obj) noexcept { static_cast<Stored<T>*>(obj)->~Stored<T>(); },
};

}  // namespace detail

/// Type-erased message body with small-buffer storage. The address of the
/// per-type operations table doubles as the type tag, so `get<T>()` is a
/// single pointer comparison.
class Payload {
 public:
  Payload() = default;

  template <class T, class = std::enable_if_t<!std::is_same_v<std::decay_t<T>, Payload>>>
  explicit Payload(T&& value) {
    using U = std::decay_t<T>;
    if constexpr (detail::kStoredInline<U>) {
      new (buffer_) U(std::forward<T>(value));
    } else {
      new (buffer_) std::shared_ptr<const U>(std::make_shared<const U>(std::forward<T>(value)));
    }
    ops_ = &detail::kOps<U>;
  }

  Payload(const Payload& other) : ops_(other.ops_) {
    if (ops_) ops_->copy(buffer_, other.buffer_);
  }
  Payload(Payload&& other) noexcept : ops_(other.ops_) {
    if (ops_) {
      ops_->move(buffer_, other.buffer_);
      other.reset();
    }
  }
  Payload& operator=(const Payload& other) {
    if (this != &other) {
      Payload tmp(other);
      *this = std::move(tmp);
    }
    return *this;
  }
  Payload& operator=(Payload&& other) noexcept {
    if (this != &other) {
      reset();
      ops_ = other.ops_;
      if (ops_) {
        ops_->move(buffer_, other.buffer_);
        other.reset();
      }
    }
    return *this;
  }
  ~Payload() { reset(); }

  bool empty() const noexcept { return ops_ == nullptr; }

  template <class T>
  bool holds() const noexcept {
    return ops_ == &detail::kOps<T>;
  }

  template <class T>
  const T* get() const noexcept {
    if (!holds<T>()) return nullptr;
    if constexpr (detail::kStoredInline<T>) {
      return std::launder(reinterpret_cast<const T*>(buffer_));
    } else {
      return std::launder(reinterpret_cast<const std::shared_ptr<const T>*>(buffer_))->get();
    }
  }

 private:
  void reset() noexcept {
    if (ops_) {
      ops_->destroy(buffer_);
      ops_ = nullptr;
    }
  }

  alignas(std::max_align_t) unsigned char buffer_[detail::kInlinePayload];
  const detail::PayloadOps* ops_ = nullptr;
};

/// A message travelling between processor instances. Value-semantic and safe
/// to hand between workers.
class ContentEvent {
 public:
  ContentEvent() = default;

  template <class T>
  static ContentEvent of(T&& body) {
    ContentEvent e;
    e.payload_ = Payload(std::forward<T>(body));
    return e;
  }
  template <class T>
  static ContentEvent keyed(std::string key, T&& body) {
    ContentEvent e = of(std::forward<T>(body));
    e.key_ = std::move(key);
    return e;
  }
  /// End-of-stream marker delivered once to every processor instance.
  static ContentEvent terminal() {
    ContentEvent e;
    e.terminal_ = true;
    return e;
  }

  bool isTerminal() const noexcept { return terminal_; }
  const std::optional<std::string>& key() const noexcept { return key_; }
  const Payload& payload() const noexcept { return payload_; }

  template <class T>
  const T* as() const noexcept {
    return payload_.get<T>();
  }

 private:
  Payload payload_;
  std::optional<std::string> key_;
  bool terminal_ = false;
};

/// Generic record payload for tests and simple pipelines.
struct Record {
  std::uint64_t sequence = 0;
  double value = 0.0;
};

}  // namespace streamforge
