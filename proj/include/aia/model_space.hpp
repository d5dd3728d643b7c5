#pragma once

// Palm-tuple algebra and the bookkeeping of the current lattice node.

#include <array>
#include <deque>
#include <optional>

#include "aia/pddl.hpp"

namespace aia {

/// Removes the palm tuple; identity when absent.
Model abstract(const Model& model, const PalmTuple& palm);

/// Adds <pal, mode>; throws VariantConflict if any variant of pal is present.
Model refine(const Model& model, const PalTuple& pal, Mode mode);

std::array<PalmTuple, 3> variants(const PalTuple& pal);
bool are_variants(const PalmTuple& a, const PalmTuple& b);

/// Fraction of pal tuples whose mode in `estimate` equals the mode in `truth`;
/// a tuple absent from a model counts as Mode::none.
double accuracy(const Model& estimate, const Model& truth);

/// Fraction of the non-none palm tuples of `truth` reproduced by `estimate`.
double palm_accuracy(const Model& estimate, const Model& truth);

void require_same_vocabulary(const Vocabulary& a, const Vocabulary& b);

/// Unresolved pal tuples in refinement order.
class PalOrdering {
 public:
  PalOrdering() = default;
  explicit PalOrdering(std::vector<PalTuple> queue) : queue_(queue.begin(), queue.end()) {}
  static PalOrdering default_for(const Vocabulary& vocabulary) {
    return PalOrdering(all_pal_tuples(vocabulary));
  }

  bool empty() const { return queue_.empty(); }
  std::size_t size() const { return queue_.size(); }
  const PalTuple& front() const { return queue_.front(); }
  void pop() { queue_.pop_front(); }
  bool contains(const PalTuple& pal) const;
  /// Removes a tuple resolved out of band.
  bool remove(const PalTuple& pal);
  const std::deque<PalTuple>& queue() const { return queue_; }

 private:
  std::deque<PalTuple> queue_;
};

/// The models at one lattice node. Every member assigns one mode to each pal
/// tuple of the shared footprint; tuples resolved to several functionally
/// indistinguishable modes keep all of them, and the members are all
/// combinations of the retained modes.
class ModelSet {
 public:
  ModelSet() = default;
  /// Only the empty model.
  explicit ModelSet(std::shared_ptr<const Vocabulary> vocabulary) : vocabulary_(std::move(vocabulary)) {}

  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const std::shared_ptr<const Vocabulary>& vocabulary_ptr() const { return vocabulary_; }
  const std::map<PalTuple, std::vector<Mode>>& alternatives() const { return alternatives_; }

  /// Number of members, saturating at the largest representable value.
  std::uint64_t size() const;
  std::size_t footprint_size() const { return alternatives_.size(); }
  bool in_footprint(const PalTuple& pal) const { return alternatives_.count(pal) != 0; }
  /// The single retained mode, if the tuple is resolved unambiguously.
  std::optional<Mode> definite_mode(const PalTuple& pal) const;

  /// The member preferring none, then +, then - on every tuple.
  Model representative() const;
  /// Members in lexicographic order of mode choices, at most `limit` of them.
  std::vector<Model> members(std::size_t limit) const;
  bool contains(const Model& model) const;

  /// Cross product with the given modes of a new pal tuple.
  void refine(const PalTuple& pal, const std::vector<Mode>& modes);
  /// Keeps only `modes` for a footprint tuple; returns false if none would survive.
  bool restrict(const PalTuple& pal, const std::vector<Mode>& modes);

  bool operator==(const ModelSet& other) const { return alternatives_ == other.alternatives_; }

 private:
  std::shared_ptr<const Vocabulary> vocabulary_;
  std::map<PalTuple, std::vector<Mode>> alternatives_;
};

}  // namespace aia
