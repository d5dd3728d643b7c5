#include "aia/model_space.hpp"

#include <algorithm>
#include <limits>

namespace aia {

Model abstract(const Model& model, const PalmTuple& palm) {
  Model out = model;
  if (model.mode_of(palm.pal) == palm.mode) out.erase(palm.pal);
  return out;
}

Model refine(const Model& model, const PalTuple& pal, Mode mode) {
  if (model.contains_variant(pal))
    throw VariantConflict("model already resolves " + to_string(pal, model.vocabulary()));
  Model out = model;
  out.insert(PalmTuple{pal, mode});
  return out;
}

std::array<PalmTuple, 3> variants(const PalTuple& pal) {
  return {PalmTuple{pal, Mode::positive}, PalmTuple{pal, Mode::negative}, PalmTuple{pal, Mode::none}};
}

bool are_variants(const PalmTuple& a, const PalmTuple& b) { return a.pal == b.pal && a.mode != b.mode; }

void require_same_vocabulary(const Vocabulary& a, const Vocabulary& b) {
  if (a.predicates != b.predicates) throw VocabularyMismatch("predicate vocabularies differ");
  if (a.actions.size() != b.actions.size()) throw VocabularyMismatch("action header sets differ");
  for (const ActionHeader& header : a.actions) {
    const ActionHeader* other = b.find_action(header.name);
    if (!other || other->sorts != header.sorts)
      throw VocabularyMismatch("action header '" + header.name + "' differs");
  }
}

double accuracy(const Model& estimate, const Model& truth) {
  require_same_vocabulary(estimate.vocabulary(), truth.vocabulary());
  std::vector<PalTuple> gamma = all_pal_tuples(truth.vocabulary());
  if (gamma.empty()) return 1.0;
  std::size_t correct = 0;
  for (const PalTuple& pal : gamma) {
    if (estimate.mode_of(pal).value_or(Mode::none) == truth.mode_of(pal).value_or(Mode::none)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gamma.size());
}

double palm_accuracy(const Model& estimate, const Model& truth) {
  require_same_vocabulary(estimate.vocabulary(), truth.vocabulary());
  std::size_t total = 0;
  std::size_t correct = 0;
  for (const auto& [pal, mode] : truth.palms()) {
    if (mode == Mode::none) continue;
    ++total;
    if (estimate.mode_of(pal) == mode) ++correct;
  }
  return total == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(total);
}

bool PalOrdering::contains(const PalTuple& pal) const {
  return std::find(queue_.begin(), queue_.end(), pal) != queue_.end();
}

bool PalOrdering::remove(const PalTuple& pal) {
  auto it = std::find(queue_.begin(), queue_.end(), pal);
  if (it == queue_.end()) return false;
  queue_.erase(it);
  return true;
}

namespace {

int preference(Mode mode) {
  switch (mode) {
    case Mode::none:
      return 0;
    case Mode::positive:
      return 1;
    case Mode::negative:
      break;
  }
  return 2;
}

}  // namespace

std::uint64_t ModelSet::size() const {
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t n = 1;
  for (const auto& [pal, modes] : alternatives_) {
    if (modes.empty()) return 0;
    if (n > cap / modes.size()) return cap;
    n *= modes.size();
  }
  return n;
}

std::optional<Mode> ModelSet::definite_mode(const PalTuple& pal) const {
  auto it = alternatives_.find(pal);
  if (it == alternatives_.end() || it->second.size() != 1) return std::nullopt;
  return it->second.front();
}

Model ModelSet::representative() const {
  Model model(vocabulary_);
  for (const auto& [pal, modes] : alternatives_) {
    Mode best = *std::min_element(modes.begin(), modes.end(),
                                  [](Mode a, Mode b) { return preference(a) < preference(b); });
    model.insert(PalmTuple{pal, best});
  }
  return model;
}

std::vector<Model> ModelSet::members(std::size_t limit) const {
  std::vector<Model> out;
  std::vector<std::pair<const PalTuple*, const std::vector<Mode>*>> slots;
  for (const auto& [pal, modes] : alternatives_) slots.emplace_back(&pal, &modes);
  std::vector<std::size_t> choice(slots.size(), 0);
  if (size() == 0) return out;
  while (out.size() < limit) {
    Model model(vocabulary_);
    for (std::size_t k = 0; k < slots.size(); ++k)
      model.insert(PalmTuple{*slots[k].first, (*slots[k].second)[choice[k]]});
    out.push_back(std::move(model));
    std::size_t k = slots.size();
    while (k > 0) {
      --k;
      if (++choice[k] < slots[k].second->size()) break;
      choice[k] = 0;
      if (k == 0) return out;
    }
    if (slots.empty()) break;
  }
  return out;
}

bool ModelSet::contains(const Model& model) const {
  if (model.size() != alternatives_.size()) return false;
  for (const auto& [pal, mode] : model.palms()) {
    auto it = alternatives_.find(pal);
    if (it == alternatives_.end()) return false;
    if (std::find(it->second.begin(), it->second.end(), mode) == it->second.end()) return false;
  }
  return true;
}

void ModelSet::refine(const PalTuple& pal, const std::vector<Mode>& modes) {
  if (alternatives_.count(pal))
    throw VariantConflict("lattice node already resolves " + to_string(pal, *vocabulary_));
  if (modes.empty()) throw Error("refining with no surviving mode");
  std::vector<Mode> sorted = modes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  alternatives_.emplace(pal, std::move(sorted));
}

bool ModelSet::restrict(const PalTuple& pal, const std::vector<Mode>& modes) {
  auto it = alternatives_.find(pal);
  if (it == alternatives_.end()) return false;
  std::vector<Mode> kept;
  for (Mode m : it->second)
    if (std::find(modes.begin(), modes.end(), m) != modes.end()) kept.push_back(m);
  if (kept.empty()) return false;
  it->second = std::move(kept);
  return true;
}

}  // namespace aia
