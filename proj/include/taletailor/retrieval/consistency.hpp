#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace taletailor::retrieval {

/// Classifier output for one image over a fixed taxonomy.
struct ClassDistribution {
  std::string image_id;
  std::vector<double> probabilities;
};

/// TSV rows: image id, then one probability per class. Rows are rescaled to
/// sum to 1 when they are within 1e-3 of it (printed probabilities are
/// rounded); other sums, negative or non-finite entries and ragged rows are
/// rejected with std::runtime_error.
std::vector<ClassDistribution> parse_class_distributions(std::istream& in);
std::vector<ClassDistribution> load_class_distributions(const std::filesystem::path& path);

/// D_KL(p||q) + D_KL(q||p), floored like every other divergence here.
double symmetric_kl(std::span<const double> p, std::span<const double> q);

/// Sum over unordered image pairs of the symmetrized KL. Lower is more
/// consistent; fewer than two images score 0. Throws std::invalid_argument
/// when taxonomies differ in size.
double consistency(std::span<const ClassDistribution> images);

struct StoryImages {
  std::string story_id;
  std::vector<ClassDistribution> images;
};

struct RankedStory {
  std::string story_id;
  std::optional<double> consistency;  // nullopt for image-free stories
};

/// Ascending consistency; image-free stories go last. Stable.
std::vector<RankedStory> rank_stories_by_consistency(std::span<const StoryImages> stories);

}  // namespace taletailor::retrieval
