// End-to-end in-memory run: synthesize a small corpus, extract features,
// split, train both classifiers, and print held-out accuracy.

#include <cstdio>

#include "epigraph/epigraph.hpp"

int main() {
  using namespace epigraph;

  std::vector<LabeledSample> samples;
  PipelineConfig cfg;
  int id = 0;
  for (Material material : kAllMaterials)
    for (Background bg : kAllBackgrounds)
      for (int i = 0; i < 12; ++i) {
        std::uint64_t seed = mix_seed(99, static_cast<std::uint64_t>(id));
        GrayRaster img = synth_image(material, bg, seed, 96);
        EnhanceResult r = enhance_image(img, cfg);
        char buf[32];
        std::snprintf(buf, sizeof buf, "img_%03d", id++);
        samples.push_back({buf, material, bg, r.features.features});
      }

  DatasetSplit split = split_dataset(samples, 0.8, 42);
  std::printf("%zu train / %zu test\n", split.train.size(),
              split.test.size());

  KnnModel knn = KnnModel::train(split.train, 3);
  SvmModel svm = SvmModel::train(split.train, {1.0, 1000, 42});
  std::printf("knn accuracy: %.3f\n",
              evaluate(knn, split.test).overall_accuracy);
  std::printf("svm accuracy: %.3f\n",
              evaluate(svm, split.test).overall_accuracy);
  return 0;
}
