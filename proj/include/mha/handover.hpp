#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <memory>

namespace mha {

/// Single-writer / single-reader cell carrying immutable snapshots from the
/// control thread to the audio thread.
///
/// Every published snapshot gets a sequence number. The reader records the
/// sequence number of the snapshot it currently holds; the writer frees only
/// snapshots older than that. Because `latest_` only ever moves forward, a
/// reader that has loaded a pointer but not yet announced it still holds a
/// snapshot at least as new as its last announcement, so it is never freed
/// underneath it.
///
/// publish() and reclaim() belong to the control thread, acquire() to the
/// audio thread. acquire() is wait-free and never allocates or frees.
template <class T>
class HandoverCell {
 public:
  HandoverCell() = default;
  HandoverCell(const HandoverCell&) = delete;
  HandoverCell& operator=(const HandoverCell&) = delete;

  void publish(std::unique_ptr<const T> snapshot) {
    auto node = std::make_unique<Node>(std::move(snapshot), ++last_seq_);
    latest_.store(node.get(), std::memory_order_release);
    owned_.push_back(std::move(node));
  }

  template <class... Args>
  void emplace(Args&&... args) {
    publish(std::make_unique<const T>(std::forward<Args>(args)...));
  }

  /// Latest published snapshot, or nullptr before the first publish.
  const T* acquire() noexcept {
    const Node* n = latest_.load(std::memory_order_acquire);
    if (n != current_) {
      current_ = n;
      reader_seq_.store(n->seq, std::memory_order_release);
    }
    return current_ ? current_->value.get() : nullptr;
  }

  /// Frees snapshots the reader can no longer observe. Returns the count.
  std::size_t reclaim() {
    const std::uint64_t held = reader_seq_.load(std::memory_order_acquire);
    std::size_t freed = 0;
    // The newest snapshot always stays, even if the reader never looked.
    while (owned_.size() > 1 && owned_.front()->seq < held) {
      owned_.pop_front();
      ++freed;
    }
    return freed;
  }

  /// Snapshots still owned by the writer, including the latest.
  std::size_t retained() const noexcept { return owned_.size(); }

  /// Control thread only; forget everything. The reader must be quiescent.
  void reset() noexcept {
    latest_.store(nullptr, std::memory_order_release);
    current_ = nullptr;
    reader_seq_.store(0, std::memory_order_release);
    owned_.clear();
  }

 private:
  struct Node {
    Node(std::unique_ptr<const T> v, std::uint64_t s) : value(std::move(v)), seq(s) {}
    std::unique_ptr<const T> value;
    std::uint64_t seq;
  };

  std::atomic<const Node*> latest_{nullptr};
  std::atomic<std::uint64_t> reader_seq_{0};
  const Node* current_ = nullptr;  // reader side
  std::uint64_t last_seq_ = 0;     // writer side
  std::deque<std::unique_ptr<Node>> owned_;
};

}  // namespace mha
