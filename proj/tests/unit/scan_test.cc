// Copyright 2026 The dlprep Authors
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

#include "dlprep/scan/scanner.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "dlprep/scan/manifest.h"
#include "dlprep/scan/stats.h"
#include "dlprep/scan/zip.h"
#include "support/testdata.h"

namespace dlprep::scan {
namespace {

using testing::ReadTestData;

const std::string kFaceRegistrar = "com.google.mlkit.vision.face.internal.FaceRegistrar";

TEST(ModelSuffixTest, FinalComponentCaseInsensitive) {
  std::vector<std::string> table = {".tflite", ".tfl", ".lite"};
  EXPECT_EQ(".tflite", MatchModelSuffix("assets/detector.tflite", table));
  EXPECT_EQ(".tflite", MatchModelSuffix("assets/DETECTOR.TFLITE", table));
  EXPECT_EQ(".lite", MatchModelSuffix("assets/model.lite", table));
  EXPECT_EQ(".tfl", MatchModelSuffix("m.tfl", table));
  EXPECT_EQ("", MatchModelSuffix("assets/detector.tflite.bak", table));
  EXPECT_EQ("", MatchModelSuffix("assets.tflite/readme.txt", table));
  EXPECT_EQ("", MatchModelSuffix("assets/.tflite", table));
  EXPECT_EQ("", MatchModelSuffix("assets/satellite", table));
}

TEST(ExtractServicesTest, RegistrarTable) {
  auto services = ExtractServices(ReadTestData("manifest/face_segmentation.xml"));
  std::vector<std::string> names;
  for (const auto& s : services) names.push_back(s.Name());
  EXPECT_EQ((std::vector<std::string>{
                "face_detection", "selfie_segmentation",
                "other(com.google.mlkit.vision.common.internal.VisionCommonRegistrar)"}),
            names);
  EXPECT_EQ(kFaceRegistrar, services[0].registrar);
}

TEST(ExtractServicesTest, SingleFaceRegistrar) {
  std::string manifest = "<manifest><application><meta-data android:name=\"" + kFaceRegistrar +
                         "\"/></application></manifest>";
  auto services = ExtractServices(manifest);
  ASSERT_EQ(1u, services.size());
  EXPECT_EQ(ServiceKind::kFaceDetection, services[0].kind);
}

TEST(ExtractServicesTest, OrderFollowsStringSearch) {
  // Independent oracle: positions of each registrar string in the text.
  std::string text = ReadTestData("manifest/face_segmentation.xml");
  size_t face = text.find("FaceRegistrar");
  size_t seg = text.find("SegmentationRegistrar");
  ASSERT_LT(face, seg);
  auto services = ExtractServices(text);
  ASSERT_GE(services.size(), 2u);
  EXPECT_EQ(ServiceKind::kFaceDetection, services[0].kind);
  EXPECT_EQ(ServiceKind::kSelfieSegmentation, services[1].kind);
}

TEST(ExtractServicesTest, NoMlkitAndMalformed) {
  std::vector<std::string> warnings;
  EXPECT_TRUE(ExtractServices(ReadTestData("manifest/plain.xml"), &warnings).empty());
  EXPECT_TRUE(warnings.empty());
  EXPECT_TRUE(ExtractServices(ReadTestData("manifest/malformed.xml"), &warnings).empty());
  ASSERT_EQ(1u, warnings.size());
  EXPECT_NE(std::string::npos, warnings[0].find("malformed"));
}

TEST(ExtractServicesTest, BinaryManifestNeedsDecoding) {
  std::vector<std::string> warnings;
  std::string axml("\x03\x00\x08\x00\x10\x00\x00\x00", 8);
  EXPECT_TRUE(ExtractServices(axml, &warnings).empty());
  ASSERT_EQ(1u, warnings.size());
  EXPECT_NE(std::string::npos, warnings[0].find("binary"));
}

TEST(ClassifyRegistrarTest, Kinds) {
  EXPECT_EQ(ServiceKind::kBarcode,
            ClassifyRegistrar("com.google.mlkit.vision.barcode.internal.BarcodeRegistrar"));
  EXPECT_EQ(ServiceKind::kPose,
            ClassifyRegistrar("com.google.mlkit.vision.pose.internal.PoseRegistrar"));
  EXPECT_EQ(ServiceKind::kOther,
            ClassifyRegistrar("com.google.mlkit.vision.text.internal.TextRegistrar"));
}

TEST(ScanArchiveTest, ModelFileBySuffix) {
  DlVerdict v = ScanPath(testing::TestDataPath("zip/python_made.apk"));
  EXPECT_EQ(VerdictCategory::kDl, v.category);
  EXPECT_TRUE(v.is_dl_app);
  ASSERT_EQ(1u, v.model_files.size());
  EXPECT_EQ("assets/Detector.TFLite", v.model_files[0].path);
  EXPECT_EQ(".tflite", v.model_files[0].suffix);
  ASSERT_EQ(1u, v.tflite_api_refs.size());
  EXPECT_EQ("Lcom/google/mlkit/", v.tflite_api_refs[0].prefix);
  EXPECT_EQ(3u, v.mlkit_services.size());
  EXPECT_TRUE(v.UsesMlkit());
  EXPECT_EQ(1u, v.smali_classes);
  EXPECT_EQ(0u, v.short_class_names);
}

std::string Smali(const std::string& cls, const std::string& body = "") {
  return ".class public " + cls + "\n.super Ljava/lang/Object;\n" + body;
}

TEST(ScanArchiveTest, NothingFound) {
  ZipWriter w;
  w.Add("AndroidManifest.xml", ReadTestData("manifest/plain.xml"));
  w.Add("smali/com/example/notes/A.smali", Smali("Lcom/example/notes/A;"));
  DlVerdict v = ScanArchive(w.Finish(), "notes.apk");
  EXPECT_EQ(VerdictCategory::kNonDl, v.category);
  EXPECT_FALSE(v.is_dl_app);
  EXPECT_TRUE(v.model_files.empty());
  EXPECT_TRUE(v.tflite_api_refs.empty());
  EXPECT_TRUE(v.reasons.empty());
  EXPECT_TRUE(v.warnings.empty());
}

TEST(ScanArchiveTest, ApiReferenceWithoutModelFile) {
  ZipWriter w;
  w.Add("AndroidManifest.xml", ReadTestData("manifest/plain.xml"));
  w.Add("smali/com/example/B.smali",
        Smali("Lcom/example/B;",
              ".field private interp:Lorg/tensorflow/lite/Interpreter;\n"));
  DlVerdict v = ScanArchive(w.Finish(), "b.apk");
  EXPECT_TRUE(v.is_dl_app);
  ASSERT_EQ(1u, v.tflite_api_refs.size());
  EXPECT_EQ((ApiRefHit{"smali/com/example/B.smali", "Lorg/tensorflow/lite/"}),
            v.tflite_api_refs[0]);
  EXPECT_FALSE(v.UsesMlkit());
}

TEST(ScanArchiveTest, DexStringData) {
  ZipWriter w;
  w.Add("AndroidManifest.xml", ReadTestData("manifest/plain.xml"));
  std::string dex = std::string("dex\n035\0", 8) + std::string(100, '\0') +
                    "\x1fLorg/tensorflow/lite/Interpreter;" + std::string(8, '\0');
  w.Add("classes2.dex", dex);
  DlVerdict v = ScanArchive(w.Finish(), "d.apk");
  EXPECT_TRUE(v.is_dl_app);
  EXPECT_EQ("classes2.dex", v.tflite_api_refs.at(0).file);
}

TEST(ScanArchiveTest, EvidenceIsPathSorted) {
  ZipWriter w;
  w.Add("z/model.lite", "x");
  w.Add("AndroidManifest.xml", ReadTestData("manifest/plain.xml"));
  w.Add("a/model.tfl", "x");
  w.Add("smali/b/C.smali", Smali("Lb/C;", "# Lcom/google/mlkit/vision/common/InputImage;\n"));
  w.Add("smali/a/C.smali", Smali("La/C;", "# Lorg/tensorflow/lite/Interpreter;\n"));
  DlVerdict v = ScanArchive(w.Finish(), "e.apk");
  ASSERT_EQ(2u, v.model_files.size());
  EXPECT_EQ("a/model.tfl", v.model_files[0].path);
  EXPECT_EQ("z/model.lite", v.model_files[1].path);
  ASSERT_EQ(2u, v.tflite_api_refs.size());
  EXPECT_EQ("smali/a/C.smali", v.tflite_api_refs[0].file);
  EXPECT_EQ("smali/b/C.smali", v.tflite_api_refs[1].file);
  EXPECT_EQ(2u, v.short_class_names);
}

TEST(ScanArchiveTest, CorruptAndEncryptedAreUnscannable) {
  DlVerdict corrupt = ScanArchive("PK\x03\x04garbage", "c.apk");
  EXPECT_EQ(VerdictCategory::kUnscannable, corrupt.category);
  EXPECT_FALSE(corrupt.is_dl_app);
  EXPECT_NE(std::string::npos, corrupt.error.find("corrupt"));

  ZipWriter w;
  w.Add("AndroidManifest.xml", ReadTestData("manifest/plain.xml"));
  w.AddEncrypted("classes.dex", "ciphertext");
  DlVerdict encrypted = ScanArchive(w.Finish(), "enc.apk");
  EXPECT_EQ(VerdictCategory::kUnscannable, encrypted.category);
  EXPECT_NE(std::string::npos, encrypted.error.find("encrypted"));
}

TEST(ScanArchiveTest, MissingManifestWarns) {
  ZipWriter w;
  w.Add("assets/m.tflite", "x");
  DlVerdict v = ScanArchive(w.Finish(), "m.apk");
  EXPECT_TRUE(v.is_dl_app);
  EXPECT_NE(v.warnings.end(), std::find(v.warnings.begin(), v.warnings.end(),
                                        "missing AndroidManifest.xml"));
}

TEST(ScanArchiveTest, AddingEntriesNeverClearsVerdict) {
  std::mt19937_64 rng(7);
  std::vector<std::pair<std::string, std::string>> pool = {
      {"assets/readme.txt", "x"},
      {"lib/arm64-v8a/libfoo.so", "x"},
      {"smali/q/R.smali", Smali("Lq/R;")},
      {"res/raw/notes.lite.txt", "x"},
  };
  for (int trial = 0; trial < 50; ++trial) {
    ZipWriter w;
    w.Add("assets/net.tflite", "x");
    DlVerdict before = ScanArchive(w.Finish(), "t.apk");
    ASSERT_TRUE(before.is_dl_app);
    size_t extra = rng() % 6;
    for (size_t i = 0; i < extra; ++i) {
      auto& [name, data] = pool[rng() % pool.size()];
      w.Add(name + std::to_string(i), data);
    }
    if (rng() % 2) w.AddEncrypted("classes.dex", "ciphertext");
    EXPECT_TRUE(ScanArchive(w.Finish(), "t.apk").is_dl_app);
  }
}

TEST(ScanPathTest, DisassembledDirectory) {
  auto dir = std::filesystem::temp_directory_path() / "dlprep_scan_dir_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "smali/com/example/facecam");
  std::filesystem::create_directories(dir / "assets");
  std::filesystem::copy_file(testing::TestDataPath("manifest/face_segmentation.xml"),
                             dir / "AndroidManifest.xml");
  std::filesystem::copy_file(testing::TestDataPath("smali/face_analyzer.smali"),
                             dir / "smali/com/example/facecam/FaceAnalyzer.smali");
  DlVerdict v = ScanPath(dir);
  EXPECT_EQ(VerdictCategory::kDl, v.category);
  EXPECT_TRUE(v.model_files.empty());
  EXPECT_EQ(1u, v.tflite_api_refs.size());
  EXPECT_EQ(3u, v.mlkit_services.size());
  std::filesystem::remove_all(dir);
}

DlVerdict MlkitApp(std::vector<ServiceKind> kinds) {
  DlVerdict v;
  v.category = VerdictCategory::kDl;
  v.is_dl_app = true;
  v.tflite_api_refs.push_back({"x.smali", "Lcom/google/mlkit/"});
  for (auto k : kinds) {
    std::string reg = k == ServiceKind::kFaceDetection        ? "FaceRegistrar"
                      : k == ServiceKind::kSelfieSegmentation ? "SegmentationRegistrar"
                                                              : "BarcodeRegistrar";
    v.mlkit_services.push_back({k, "com.google.mlkit.vision.x." + reg});
  }
  return v;
}

const ServiceCount* Find(const CorpusStats& s, const std::string& name) {
  for (const auto& c : s.services)
    if (c.service == name) return &c;
  return nullptr;
}

TEST(PercentTest, HalfUpHundredths) {
  EXPECT_EQ("90.32", Percent::Of(28, 31).ToString());
  EXPECT_EQ("6.45", Percent::Of(2, 31).ToString());
  EXPECT_EQ("3.23", Percent::Of(1, 31).ToString());
  EXPECT_EQ("81.56", Percent::Of(261, 320).ToString());
  EXPECT_EQ("0.00", Percent::Of(0, 0).ToString());
  EXPECT_EQ("100.00", Percent::Of(5, 5).ToString());
  EXPECT_EQ("12.50", Percent::Of(1, 8).ToString());
  EXPECT_EQ("0.01", Percent::Of(1, 20000).ToString());  // 0.005 rounds up
  EXPECT_EQ("0.00", Percent::Of(1, 20001).ToString());
}

TEST(PercentTest, MatchesExactRationalRounding) {
  // Oracle: compare count*10000 against (2k+1)*total/2 boundaries directly.
  for (uint64_t total = 1; total <= 60; ++total)
    for (uint64_t count = 0; count <= total; ++count) {
      int64_t h = Percent::Of(count, total).hundredths;
      // h is the unique integer with (h - 0.5) * total <= count*10000 < (h + 0.5) * total.
      EXPECT_LE(static_cast<int64_t>((2 * h - 1) * total), static_cast<int64_t>(20000 * count));
      EXPECT_LT(static_cast<int64_t>(20000 * count), static_cast<int64_t>((2 * h + 1) * total));
    }
}

TEST(AggregateTest, ServiceShares) {
  std::vector<DlVerdict> v;
  for (int i = 0; i < 28; ++i) v.push_back(MlkitApp({ServiceKind::kFaceDetection}));
  for (int i = 0; i < 2; ++i) v.push_back(MlkitApp({ServiceKind::kSelfieSegmentation}));
  v.push_back(MlkitApp({ServiceKind::kBarcode}));
  CorpusStats s = Aggregate(v);
  EXPECT_EQ(31u, s.mlkit_dl_apps);
  EXPECT_TRUE(s.percentages_defined);
  EXPECT_EQ("90.32", Find(s, "face_detection")->percent.ToString());
  EXPECT_EQ("6.45", Find(s, "selfie_segmentation")->percent.ToString());
  EXPECT_EQ("3.23", Find(s, "barcode")->percent.ToString());
}

TEST(AggregateTest, Empty) {
  CorpusStats s = Aggregate({});
  EXPECT_EQ(0u, s.total_apps);
  EXPECT_FALSE(s.percentages_defined);
  EXPECT_TRUE(s.services.empty());
  RecordInjection(&s, 0, 0);
  EXPECT_EQ("0.00", s.injectable_percent->ToString());
}

TEST(AggregateTest, OverlappingServices) {
  std::vector<DlVerdict> v = {
      MlkitApp({ServiceKind::kFaceDetection, ServiceKind::kSelfieSegmentation})};
  CorpusStats s = Aggregate(v);
  EXPECT_EQ(1u, Find(s, "face_detection")->apps);
  EXPECT_EQ(1u, Find(s, "selfie_segmentation")->apps);
  int64_t sum = 0;
  for (const auto& c : s.services) sum += c.percent.hundredths;
  EXPECT_EQ(20000, sum);
}

TEST(AggregateTest, UnscannableOutsideDenominator) {
  std::vector<DlVerdict> v = {MlkitApp({ServiceKind::kFaceDetection}),
                              MlkitApp({ServiceKind::kBarcode})};
  DlVerdict bad;
  bad.category = VerdictCategory::kUnscannable;
  v.push_back(bad);
  DlVerdict plain;
  v.push_back(plain);
  CorpusStats s = Aggregate(v);
  EXPECT_EQ(4u, s.total_apps);
  EXPECT_EQ(1u, s.unscannable_apps);
  EXPECT_EQ(3u, s.scanned_apps);
  EXPECT_EQ(1u, s.non_dl_apps);
  EXPECT_EQ(2u, s.mlkit_dl_apps);
  EXPECT_EQ("50.00", Find(s, "face_detection")->percent.ToString());
}

TEST(AggregateTest, PermutationInvariant) {
  std::vector<DlVerdict> v;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    std::vector<ServiceKind> kinds;
    if (rng() % 2) kinds.push_back(ServiceKind::kFaceDetection);
    if (rng() % 3 == 0) kinds.push_back(ServiceKind::kSelfieSegmentation);
    if (rng() % 5 == 0) kinds.push_back(ServiceKind::kBarcode);
    v.push_back(MlkitApp(kinds));
    if (rng() % 4 == 0) v.back().category = VerdictCategory::kUnscannable;
  }
  CorpusStats expected = Aggregate(v);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_EQ(expected, Aggregate(v));
  }
}

TEST(RecordInjectionTest, HeadlineFormatting) {
  CorpusStats s;
  s.mlkit_dl_apps = 320;
  RecordInjection(&s, 300, 261);
  EXPECT_EQ("81.56", s.injectable_percent->ToString());
  EXPECT_EQ("87.00", s.injectable_of_matched_percent->ToString());
}

}  // namespace
}  // namespace dlprep::scan
