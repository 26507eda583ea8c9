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

#include "support/corpus.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "dlprep/scan/zip.h"
#include "support/rename.h"

namespace dlprep::testing {

namespace fs = std::filesystem;
using locate::Strategy;

std::string_view AppKindName(AppKind kind) {
  switch (kind) {
    case AppKind::kInjectable: return "injectable";
    case AppKind::kNegative: return "negative";
    case AppKind::kNonDl: return "non_dl";
    case AppKind::kUnscannable: return "unscannable";
  }
  return "?";
}

size_t Corpus::Count(AppKind kind) const {
  return std::count_if(apps.begin(), apps.end(), [&](const CorpusApp& a) { return a.kind == kind; });
}

nlohmann::json Corpus::ToJson() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : apps) {
    nlohmann::json strategies = nlohmann::json::array();
    for (auto s : a.strategies) strategies.push_back(locate::StrategyName(s));
    out.push_back({{"name", a.name},
                   {"path", a.path},
                   {"kind", AppKindName(a.kind)},
                   {"archive", a.archive},
                   {"renamed", a.renamed},
                   {"category", scan::CategoryName(a.category)},
                   {"uses_mlkit", a.uses_mlkit},
                   {"services", a.services},
                   {"strategies", strategies},
                   {"wrapper_class", a.wrapper_class}});
  }
  return {{"apps", out}};
}

namespace {

constexpr std::string_view kWrapper = "Lcom/google/mlkit/vision/common/InputImage;";

using Vars = std::map<std::string, std::string>;

std::string Fill(std::string_view tmpl, const Vars& vars) {
  std::string out;
  size_t pos = 0;
  while (true) {
    size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    size_t close = tmpl.find("}}", open);
    out.append(tmpl, pos, open - pos);
    out += vars.at(std::string(tmpl.substr(open + 2, close - open - 2)));
    pos = close + 2;
  }
  out.append(tmpl, pos);
  return out;
}

// ---------------------------------------------------------------------------
// Image wrapper constructors. FORMAT is the literal stored into the format
// field; PRE is spliced in before the dimension stores.

constexpr std::string_view kBufferWrapper = R"(.class public final {{W}}
.super Ljava/lang/Object;
.source "InputImage.java"


# instance fields
.field private volatile zzb:Ljava/nio/ByteBuffer;

.field private final zzd:I

.field private final zze:I

.field private final zzf:I

.field private final zzg:I


# direct methods
.method private constructor <init>(Ljava/nio/ByteBuffer;IIII)V
    .locals 2

    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    const v0, 0x32315659

    if-eq p5, v0, :cond_0

    const/16 v0, 0x11

    if-ne p5, v0, :cond_1

    :cond_0
    const/4 v1, 0x1

    goto :goto_0

    :cond_1
    const/4 v1, 0x0

    :goto_0
    const-string v0, "Only NV21 and YV12 formats are supported"

    invoke-static {v1, v0}, Lcom/google/android/gms/common/internal/Preconditions;->checkArgument(ZLjava/lang/Object;)V

    iput-object p1, p0, {{W}}->zzb:Ljava/nio/ByteBuffer;
{{PRE}}
    iput p2, p0, {{W}}->zzd:I

    iput p3, p0, {{W}}->zze:I

    iput p4, p0, {{W}}->zzf:I

    {{FORMAT}}

    iput v0, p0, {{W}}->zzg:I

    return-void
.end method

.method public static fromByteBuffer(Ljava/nio/ByteBuffer;IIII){{W}}
    .locals 7

    new-instance v6, {{W}}

    move-object v0, v6

    move-object v1, p0

    move v2, p1

    move v3, p2

    move v4, p3

    move v5, p4

    invoke-direct/range {v0 .. v5}, {{W}}-><init>(Ljava/nio/ByteBuffer;IIII)V

    return-object v6
.end method


# virtual methods
.method public getRotationDegrees()I
    .locals 1

    iget v0, p0, {{W}}->zzf:I

    return v0
.end method
)";

constexpr std::string_view kBitmapWrapper = R"(.class public {{W}}
.super Ljava/lang/Object;
.source "InputImage.java"


# instance fields
.field private volatile zza:Landroid/graphics/Bitmap;

.field private final zzd:I

.field private final zze:I

.field private final zzf:I

.field private final zzg:I


# direct methods
.method private constructor <init>(Landroid/graphics/Bitmap;I)V
    .locals 1

    .line 1
    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    invoke-static {p1}, Lcom/google/android/gms/common/internal/Preconditions;->checkNotNull(Ljava/lang/Object;)Ljava/lang/Object;

    move-result-object v0

    check-cast v0, Landroid/graphics/Bitmap;

    iput-object v0, p0, {{W}}->zza:Landroid/graphics/Bitmap;

    .line 2
    invoke-virtual {p1}, Landroid/graphics/Bitmap;->getWidth()I

    move-result v0

    iput v0, p0, {{W}}->zzd:I

    .line 3
    invoke-virtual {p1}, Landroid/graphics/Bitmap;->getHeight()I

    move-result p1

    iput p1, p0, {{W}}->zze:I
{{PRE}}
    iput p2, p0, {{W}}->zzf:I

    {{FORMAT}}

    iput p1, p0, {{W}}->zzg:I

    return-void
.end method

.method public static fromBitmap(Landroid/graphics/Bitmap;I){{W}}
    .locals 1

    new-instance v0, {{W}}

    invoke-direct {v0, p0, p1}, {{W}}-><init>(Landroid/graphics/Bitmap;I)V

    return-object v0
.end method


# virtual methods
.method public getWidth()I
    .locals 1

    iget v0, p0, {{W}}->zzd:I

    return v0
.end method
)";

constexpr std::string_view kMediaWrapper = R"(.class public {{W}}
.super Ljava/lang/Object;
.source "InputImage.java"


# instance fields
.field private volatile zzc:Landroid/media/Image;

.field private final zzd:I

.field private final zze:I

.field private final zzf:I

.field private final zzg:I

.field private final zzh:Landroid/graphics/Matrix;


# direct methods
.method private constructor <init>(Landroid/media/Image;IIILandroid/graphics/Matrix;)V
    .locals 1

    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    invoke-static {p1}, Lcom/google/android/gms/common/internal/Preconditions;->checkNotNull(Ljava/lang/Object;)Ljava/lang/Object;

    iput-object p1, p0, {{W}}->zzc:Landroid/media/Image;
{{PRE}}
    iput p2, p0, {{W}}->zzd:I

    iput p3, p0, {{W}}->zze:I

    iput p4, p0, {{W}}->zzf:I

    {{FORMAT}}

    iput v0, p0, {{W}}->zzg:I

    iput-object p5, p0, {{W}}->zzh:Landroid/graphics/Matrix;

    return-void
.end method

.method public static fromMediaImage(Landroid/media/Image;I){{W}}
    .locals 7

    invoke-virtual {p0}, Landroid/media/Image;->getWidth()I

    move-result v2

    invoke-virtual {p0}, Landroid/media/Image;->getHeight()I

    move-result v3

    new-instance v6, {{W}}

    const/4 v5, 0x0

    move-object v0, v6

    move-object v1, p0

    move v4, p1

    invoke-direct/range {v0 .. v5}, {{W}}-><init>(Landroid/media/Image;IIILandroid/graphics/Matrix;)V

    return-object v6
.end method
)";

// ---------------------------------------------------------------------------
// Analyzers: build the wrapper from camera data and hand it to inference.

constexpr std::string_view kAnalyzerHead = R"(.class public final {{A}}
.super Ljava/lang/Object;
.source "FrameAnalyzer.java"


# instance fields
.field private final detector:{{DET}}


# direct methods
.method public constructor <init>({{DET}})V
    .locals 0

    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    iput-object p1, p0, {{A}}->detector:{{DET}}

    return-void
.end method


# virtual methods
)";

constexpr std::string_view kAnalyzeBuffer = R"(.method public analyze(II)V
    .locals 6

    mul-int v0, p1, p2

    mul-int/lit8 v0, v0, 0x3

    div-int/lit8 v0, v0, 0x2

    invoke-static {v0}, Ljava/nio/ByteBuffer;->allocateDirect(I)Ljava/nio/ByteBuffer;

    move-result-object v1

    const/4 v4, 0x0

    const/16 v5, 0x11

    move v2, p1

    move v3, p2

    invoke-static/range {v1 .. v5}, {{W}}->fromByteBuffer(Ljava/nio/ByteBuffer;IIII){{W}}

    move-result-object v0

{{INFER}}
    return-void
.end method
)";

constexpr std::string_view kAnalyzeBitmap = R"(.method public analyze(Landroid/graphics/Bitmap;I)V
    .locals 3

    const/16 v0, 0x1e0

    const/16 v1, 0x168

    const/4 v2, 0x1

    invoke-static {p1, v0, v1, v2}, Landroid/graphics/Bitmap;->createScaledBitmap(Landroid/graphics/Bitmap;IIZ)Landroid/graphics/Bitmap;

    move-result-object v0

    invoke-static {v0, p2}, {{W}}->fromBitmap(Landroid/graphics/Bitmap;I){{W}}

    move-result-object v0

{{INFER}}
    return-void
.end method
)";

constexpr std::string_view kAnalyzeMedia = R"(.method public analyze(Landroidx/camera/core/ImageProxy;)V
    .locals 3

    invoke-interface {p1}, Landroidx/camera/core/ImageProxy;->getImage()Landroid/media/Image;

    move-result-object v0

    if-nez v0, :cond_0

    return-void

    :cond_0
    invoke-interface {p1}, Landroidx/camera/core/ImageProxy;->getImageInfo()Landroidx/camera/core/ImageInfo;

    move-result-object v1

    invoke-interface {v1}, Landroidx/camera/core/ImageInfo;->getRotationDegrees()I

    move-result v1

    invoke-static {v0, v1}, {{W}}->fromMediaImage(Landroid/media/Image;I){{W}}

    move-result-object v0

{{INFER}}
    return-void
.end method
)";

constexpr std::string_view kInferMlkit = R"(    iget-object v1, p0, {{A}}->detector:{{DET}}

    invoke-interface {v1, v0}, {{DET}}->process({{W}})Lcom/google/android/gms/tasks/Task;

    move-result-object v0
)";

constexpr std::string_view kInferTflite = R"(    iget-object v1, p0, {{A}}->detector:{{DET}}

    const/4 v2, 0x0

    invoke-virtual {v1, v0, v2}, {{DET}}->run(Ljava/lang/Object;Ljava/lang/Object;)V
)";

constexpr std::string_view kActivity = R"(.class public L{{PKG}}/MainActivity;
.super Landroidx/appcompat/app/AppCompatActivity;
.source "MainActivity.java"


# direct methods
.method public constructor <init>()V
    .locals 0

    invoke-direct {p0}, Landroidx/appcompat/app/AppCompatActivity;-><init>()V

    return-void
.end method


# virtual methods
.method protected onCreate(Landroid/os/Bundle;)V
    .locals 2

    invoke-super {p0, p1}, Landroidx/appcompat/app/AppCompatActivity;->onCreate(Landroid/os/Bundle;)V

    const v0, 0x7f0b001c

    invoke-virtual {p0, v0}, L{{PKG}}/MainActivity;->setContentView(I)V

    const-string v0, "MainActivity"

    const-string v1, "created"

    invoke-static {v0, v1}, Landroid/util/Log;->d(Ljava/lang/String;Ljava/lang/String;)I

    return-void
.end method
)";

// ---------------------------------------------------------------------------
// Filler classes in the shapes a disassembler commonly emits.

constexpr std::string_view kItem = R"(.class public L{{PKG}}/model/Item{{N}};
.super Ljava/lang/Object;
.source "Item{{N}}.java"


# instance fields
.field private final id:J

.field private name:Ljava/lang/String;

.field private score:I


# direct methods
.method public constructor <init>(JLjava/lang/String;)V
    .locals 1

    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    iput-wide p1, p0, L{{PKG}}/model/Item{{N}};->id:J

    iput-object p3, p0, L{{PKG}}/model/Item{{N}};->name:Ljava/lang/String;

    const/16 v0, {{SCORE}}

    iput v0, p0, L{{PKG}}/model/Item{{N}};->score:I

    return-void
.end method


# virtual methods
.method public getName()Ljava/lang/String;
    .locals 1

    iget-object v0, p0, L{{PKG}}/model/Item{{N}};->name:Ljava/lang/String;

    return-object v0
.end method

.method public getScore()I
    .locals 1

    iget v0, p0, L{{PKG}}/model/Item{{N}};->score:I

    return v0
.end method

.method public toString()Ljava/lang/String;
    .locals 3

    new-instance v0, Ljava/lang/StringBuilder;

    invoke-direct {v0}, Ljava/lang/StringBuilder;-><init>()V

    const-string v1, "Item{id="

    invoke-virtual {v0, v1}, Ljava/lang/StringBuilder;->append(Ljava/lang/String;)Ljava/lang/StringBuilder;

    iget-wide v1, p0, L{{PKG}}/model/Item{{N}};->id:J

    invoke-virtual {v0, v1, v2}, Ljava/lang/StringBuilder;->append(J)Ljava/lang/StringBuilder;

    const/16 v1, 0x7d

    invoke-virtual {v0, v1}, Ljava/lang/StringBuilder;->append(C)Ljava/lang/StringBuilder;

    invoke-virtual {v0}, Ljava/lang/StringBuilder;->toString()Ljava/lang/String;

    move-result-object v0

    return-object v0
.end method
)";

constexpr std::string_view kMathUtil = R"(.class public final L{{PKG}}/util/MathUtil{{N}};
.super Ljava/lang/Object;
.source "MathUtil{{N}}.java"


# direct methods
.method private constructor <init>()V
    .locals 0

    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    return-void
.end method

.method public static clamp(III)I
    .locals 0

    if-ge p0, p1, :cond_0

    return p1

    :cond_0
    if-le p0, p2, :cond_1

    return p2

    :cond_1
    return p0
.end method

.method public static scale(DD)D
    .locals 2

    mul-double v0, p0, p2

    const-wide/high16 p0, 0x3fe0000000000000L    # 0.5

    add-double/2addr v0, p0

    return-wide v0
.end method

.method public static sum([I)I
    .locals 3

    const/4 v0, 0x0

    const/4 v1, 0x0

    :goto_0
    array-length v2, p0

    if-ge v1, v2, :cond_0

    aget v2, p0, v1

    add-int/2addr v0, v2

    add-int/lit8 v1, v1, 0x{{N}}

    goto :goto_0

    :cond_0
    return v0
.end method
)";

constexpr std::string_view kLabels = R"(.class public final L{{PKG}}/util/Labels{{N}};
.super Ljava/lang/Object;
.source "Labels{{N}}.java"


# direct methods
.method public constructor <init>()V
    .locals 0

    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    return-void
.end method

.method public static code(I)I
    .locals 1

    sparse-switch p0, :sswitch_data_0

    const/4 v0, 0x0

    return v0

    :sswitch_0
    const/16 v0, 0x64

    return v0

    :sswitch_1
    const/16 v0, 0xc8

    return v0

    :sswitch_data_0
    .sparse-switch
        0xa -> :sswitch_0
        0x3e8 -> :sswitch_1
    .end sparse-switch
.end method

.method public static label(I)Ljava/lang/String;
    .locals 1

    packed-switch p0, :pswitch_data_0

    const-string v0, "unknown"

    return-object v0

    :pswitch_0
    const-string v0, "low"

    return-object v0

    :pswitch_1
    const-string v0, "mid {{N}}"

    return-object v0

    :pswitch_2
    const-string v0, "high"

    return-object v0

    :pswitch_data_0
    .packed-switch 0x0
        :pswitch_0
        :pswitch_1
        :pswitch_2
    .end packed-switch
.end method
)";

constexpr std::string_view kStore = R"(.class public L{{PKG}}/io/Store{{N}};
.super Ljava/lang/Object;
.source "Store{{N}}.java"


# static fields
.field private static final TAG:Ljava/lang/String; = "Store{{N}}"

.field private static instance:L{{PKG}}/io/Store{{N}};


# direct methods
.method static constructor <clinit>()V
    .locals 1

    const/4 v0, 0x0

    sput-object v0, L{{PKG}}/io/Store{{N}};->instance:L{{PKG}}/io/Store{{N}};

    return-void
.end method

.method public constructor <init>()V
    .locals 0

    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    return-void
.end method

.method public static read(Ljava/io/File;)[B
    .locals 3

    :try_start_0
    new-instance v0, Ljava/io/FileInputStream;

    invoke-direct {v0, p0}, Ljava/io/FileInputStream;-><init>(Ljava/io/File;)V

    invoke-virtual {v0}, Ljava/io/InputStream;->available()I

    move-result v1

    new-array v1, v1, [B

    invoke-virtual {v0, v1}, Ljava/io/InputStream;->read([B)I

    invoke-virtual {v0}, Ljava/io/InputStream;->close()V
    :try_end_0
    .catch Ljava/io/IOException; {:try_start_0 .. :try_end_0} :catch_0

    return-object v1

    :catch_0
    move-exception v0

    sget-object v1, L{{PKG}}/io/Store{{N}};->TAG:Ljava/lang/String;

    const-string v2, "read failed"

    invoke-static {v1, v2, v0}, Landroid/util/Log;->w(Ljava/lang/String;Ljava/lang/String;Ljava/lang/Throwable;)I

    const/4 v0, 0x0

    new-array v0, v0, [B

    return-object v0
.end method
)";

constexpr std::string_view kCallback = R"(.class public interface abstract L{{PKG}}/api/Callback{{N}};
.super Ljava/lang/Object;
.source "Callback{{N}}.java"


# annotations
.annotation runtime Ljava/lang/FunctionalInterface;
.end annotation


# virtual methods
.method public abstract onResult(Ljava/lang/Object;)V
    .param p1    # Ljava/lang/Object;
        .annotation build Landroidx/annotation/Nullable;
        .end annotation
    .end param
.end method
)";

constexpr std::string_view kPalette = R"(.class public final L{{PKG}}/ui/Palette{{N}};
.super Ljava/lang/Object;
.source "Palette.kt"


# annotations
.annotation runtime Lkotlin/Metadata;
    k = 0x1
    mv = {
        0x1,
        0x9,
        0x0
    }
.end annotation


# static fields
.field public static final INSTANCE:L{{PKG}}/ui/Palette{{N}};


# direct methods
.method static constructor <clinit>()V
    .locals 1

    new-instance v0, L{{PKG}}/ui/Palette{{N}};

    invoke-direct {v0}, L{{PKG}}/ui/Palette{{N}};-><init>()V

    sput-object v0, L{{PKG}}/ui/Palette{{N}};->INSTANCE:L{{PKG}}/ui/Palette{{N}};

    return-void
.end method

.method private constructor <init>()V
    .locals 0

    invoke-direct {p0}, Ljava/lang/Object;-><init>()V

    return-void
.end method


# virtual methods
.method public final colors()[I
    .locals 1

    const/4 v0, 0x3

    new-array v0, v0, [I

    fill-array-data v0, :array_0

    return-object v0

    :array_0
    .array-data 4
        0xff0000
        0xff00
        0x{{N}}
    .end array-data
.end method
)";

constexpr std::string_view kFillers[] = {kItem, kMathUtil, kLabels, kStore, kCallback, kPalette};
constexpr std::string_view kFillerDirs[] = {"model/Item", "util/MathUtil", "util/Labels",
                                            "io/Store", "api/Callback", "ui/Palette"};

// ---------------------------------------------------------------------------

constexpr std::string_view kManifest = R"(<?xml version="1.0" encoding="utf-8" standalone="no"?><manifest xmlns:android="http://schemas.android.com/apk/res/android" package="{{PKGDOT}}">
    <uses-permission android:name="android.permission.CAMERA"/>
    <application android:label="@string/app_name">
        <activity android:exported="true" android:name="{{PKGDOT}}.MainActivity">
            <intent-filter>
                <action android:name="android.intent.action.MAIN"/>
                <category android:name="android.intent.category.LAUNCHER"/>
            </intent-filter>
        </activity>
{{SERVICES}}    </application>
</manifest>
)";

constexpr std::string_view kRegistrarService = R"(        <service android:exported="false" android:name="com.google.mlkit.common.internal.MlKitComponentDiscoveryService">
            <meta-data android:name="com.google.firebase.components:{{REG}}" android:value="com.google.firebase.components.ComponentRegistrar"/>
        </service>
)";

struct ServiceInfo {
  std::string name;       // as reported by the scanner
  std::string registrar;  // manifest class name
  std::string detector;   // inference entry point owner
};

const ServiceInfo kFace{"face_detection", "com.google.mlkit.vision.face.internal.FaceRegistrar",
                        "Lcom/google/mlkit/vision/face/FaceDetector;"};
const ServiceInfo kSegmentation{
    "selfie_segmentation", "com.google.mlkit.vision.segmentation.internal.SegmentationRegistrar",
    "Lcom/google/mlkit/vision/segmentation/Segmenter;"};
const ServiceInfo kBarcode{"barcode", "com.google.mlkit.vision.barcode.internal.BarcodeRegistrar",
                           "Lcom/google/mlkit/vision/barcode/BarcodeScanner;"};
constexpr std::string_view kInterpreter = "Lorg/tensorflow/lite/Interpreter;";

// Files of one app, path -> bytes.
using Files = std::map<std::string, std::string>;

struct AppSpec {
  std::string name;
  AppKind kind = AppKind::kNonDl;
  bool archive = false;
  bool renamed = false;
  Strategy strategy = Strategy::kBufferImage;
  int variant = 0;  // 0: parameter-fed sites, 1: constant-fed sites
  const ServiceInfo* service = nullptr;  // MLKit service, or null
  std::string model_path;                // empty: no model file
};

std::string FormatLine(Strategy s, bool near_miss, int variant) {
  switch (s) {
    case Strategy::kBufferImage:
      if (near_miss) return "const v0, 0x32315658";
      return variant ? "const/16 v0, 0x11" : "const v0, 0x32315659";
    case Strategy::kBitmapImage:
      return near_miss ? "const/4 p1, -0x2" : "const/4 p1, -0x1";
    case Strategy::kMediaImage:
      return near_miss ? "const/16 v0, 0x24" : "const/16 v0, 0x23";
  }
  return "";
}

std::string PreLines(Strategy s, int variant) {
  if (variant == 0) return "";
  if (s == Strategy::kBitmapImage) return "\n    const/16 p2, 0xb4\n";
  return "\n    const/16 p2, 0x280\n\n    const/16 p3, 0x1e0\n\n    const/16 p4, 0x5a\n";
}

// TFLite-only apps carry their own wrapper, leaving no MLKit descriptor.
std::string WrapperClass(const AppSpec& app, const std::string& pkg) {
  return app.service ? std::string(kWrapper) : "L" + pkg + "/camera/FrameImage;";
}

std::string WrapperText(const AppSpec& app, const std::string& wrapper) {
  bool near_miss = app.kind == AppKind::kNegative;
  Vars v = {{"W", wrapper},
            {"FORMAT", FormatLine(app.strategy, near_miss, app.variant)},
            {"PRE", PreLines(app.strategy, app.variant)}};
  switch (app.strategy) {
    case Strategy::kBufferImage: return Fill(kBufferWrapper, v);
    case Strategy::kBitmapImage: return Fill(kBitmapWrapper, v);
    case Strategy::kMediaImage: return Fill(kMediaWrapper, v);
  }
  return "";
}

std::string AnalyzerText(const AppSpec& app, const std::string& pkg) {
  std::string det = app.service ? app.service->detector : std::string(kInterpreter);
  Vars v = {{"W", WrapperClass(app, pkg)}, {"A", "L" + pkg + "/FrameAnalyzer;"}, {"DET", det}};
  v["INFER"] = Fill(app.service ? kInferMlkit : kInferTflite, v);
  std::string_view body = app.strategy == Strategy::kBufferImage   ? kAnalyzeBuffer
                          : app.strategy == Strategy::kBitmapImage ? kAnalyzeBitmap
                                                                   : kAnalyzeMedia;
  return Fill(kAnalyzerHead, v) + Fill(body, v);
}

std::string ToCrlf(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '\n') out += '\r';
    out += c;
  }
  return out;
}

// Smali sources of the app keyed by path below smali/.
Files SmaliSources(const AppSpec& app, const std::string& pkg, size_t index, size_t fillers) {
  Files files;
  bool dl = app.kind == AppKind::kInjectable || app.kind == AppKind::kNegative;
  if (dl) {
    std::string wrapper = WrapperClass(app, pkg);
    files[Renamer::PathFor(wrapper)] = WrapperText(app, wrapper);
    files[pkg + "/FrameAnalyzer.smali"] = AnalyzerText(app, pkg);
  }
  files[pkg + "/MainActivity.smali"] = Fill(kActivity, {{"PKG", pkg}});
  for (size_t i = 0; i < fillers; ++i) {
    size_t t = (index + i) % std::size(kFillers);
    std::string n = std::to_string(i + 1);
    Vars v = {{"PKG", pkg}, {"N", n}, {"SCORE", "0x" + std::to_string(40 + i)}};
    std::string text = Fill(kFillers[t], v);
    // A few files with Windows line ends or no final newline.
    if ((index + i) % 7 == 3) text = ToCrlf(text);
    if ((index + i) % 11 == 5) text.pop_back();
    files[pkg + "/" + std::string(kFillerDirs[t]) + n + ".smali"] = text;
  }
  return files;
}

std::string ManifestText(const AppSpec& app, const std::string& pkg) {
  std::string dotted = pkg;
  std::replace(dotted.begin(), dotted.end(), '/', '.');
  std::string services;
  if (app.service) services = Fill(kRegistrarService, {{"REG", app.service->registrar}});
  return Fill(kManifest, {{"PKGDOT", dotted}, {"SERVICES", services}});
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  fs::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << bytes;
}

std::string ZipFiles(const Files& files) {
  scan::ZipWriter w;
  for (const auto& [name, data] : files) w.Add(name, data, name.ends_with(".smali"));
  return w.Finish();
}

void Flip(std::string* bytes, std::string_view needle) {
  size_t at = bytes->find(needle);
  if (at == std::string::npos) throw std::logic_error("corpus: marker not found");
  (*bytes)[at] ^= 0x20;
}

std::vector<AppSpec> Plan() {
  std::vector<AppSpec> apps;
  const Strategy strategies[] = {Strategy::kBufferImage, Strategy::kBitmapImage,
                                 Strategy::kMediaImage};
  const ServiceInfo* services[] = {&kFace, &kSegmentation, &kBarcode};
  const char* models[] = {"assets/face_detector.tflite", "", "assets/models/seg.TFL",
                          "assets/barcode.lite"};
  int n = 0;
  for (int s = 0; s < 3; ++s) {
    for (int renamed = 0; renamed < 2; ++renamed) {
      for (int variant = 0; variant < 2; ++variant) {
        AppSpec a;
        a.kind = AppKind::kInjectable;
        a.strategy = strategies[s];
        a.renamed = renamed;
        a.variant = variant;
        a.service = services[(s + variant) % 3];
        a.model_path = models[n % 4];
        a.archive = n % 2 == 1;
        a.name = "app" + std::string(n < 9 ? "0" : "") + std::to_string(n + 1) + "-" +
                 std::string(locate::StrategyName(a.strategy)) + (renamed ? "-renamed" : "-plain") +
                 "-" + std::to_string(variant + 1);
        apps.push_back(a);
        ++n;
      }
    }
  }
  for (int s = 0; s < 3; ++s) {
    AppSpec a;
    a.kind = AppKind::kNegative;
    a.strategy = strategies[s];
    a.service = s == 1 ? &kFace : nullptr;
    a.model_path = "assets/model.tflite";
    a.archive = s == 2;
    a.name = "neg0" + std::to_string(s + 1) + "-near-" + std::string(locate::StrategyName(a.strategy));
    apps.push_back(a);
  }
  for (int i = 0; i < 5; ++i) {
    AppSpec a;
    a.kind = AppKind::kNonDl;
    a.archive = i % 2 == 0;
    a.name = "plain0" + std::to_string(i + 1);
    apps.push_back(a);
  }
  const char* broken[] = {"truncated", "encrypted", "badcrc"};
  for (int i = 0; i < 3; ++i) {
    AppSpec a;
    a.kind = AppKind::kUnscannable;
    a.archive = true;
    a.name = "zz0" + std::to_string(i + 1) + "-" + broken[i];
    apps.push_back(a);
  }
  return apps;
}

RenameOptions CorpusRenameOptions() {
  RenameOptions o;
  for (const char* p : {"Lcom/google/mlkit/vision/face/", "Lcom/google/mlkit/vision/segmentation/",
                        "Lcom/google/mlkit/vision/barcode/", "Lcom/google/android/gms/",
                        "Lorg/tensorflow/lite/"})
    o.protected_prefixes.push_back(p);
  return o;
}

}  // namespace

Corpus BuildCorpus(const fs::path& root, uint64_t seed) {
  Corpus corpus;
  corpus.apps_dir = root / "apps";
  fs::create_directories(corpus.apps_dir);
  std::vector<AppSpec> specs = Plan();
  for (size_t index = 0; index < specs.size(); ++index) {
    const AppSpec& spec = specs[index];
    std::string pkg = "com/example/" + spec.name.substr(0, spec.name.find('-'));
    Files smali = SmaliSources(spec, pkg, index, 8 + index % 5);

    CorpusApp truth;
    truth.name = spec.name;
    truth.kind = spec.kind;
    truth.archive = spec.archive;
    truth.renamed = spec.renamed;
    if (spec.kind == AppKind::kInjectable || spec.kind == AppKind::kNegative) {
      truth.category = scan::VerdictCategory::kDl;
      truth.wrapper_class = WrapperClass(spec, pkg);
    } else {
      truth.category = spec.kind == AppKind::kUnscannable ? scan::VerdictCategory::kUnscannable
                                                          : scan::VerdictCategory::kNonDl;
    }
    if (spec.service) truth.services.push_back(spec.service->name);
    truth.uses_mlkit = spec.service != nullptr;
    if (spec.kind == AppKind::kInjectable) truth.strategies.push_back(spec.strategy);

    if (spec.renamed) {
      std::vector<std::string> texts;
      for (const auto& [path, text] : smali) texts.push_back(text);
      Renamer renamer(seed * 1000 + index, texts, CorpusRenameOptions());
      Files renamed;
      for (const auto& [path, text] : smali) {
        std::string out = renamer.Rename(text);
        std::string cls = out.substr(0, out.find_first_of("\r\n"));
        cls = cls.substr(cls.rfind(' ') + 1);
        renamed[Renamer::PathFor(cls)] = out;
      }
      truth.wrapper_class = renamer.MapClass(kWrapper);
      smali = std::move(renamed);
    }

    Files files;
    files["AndroidManifest.xml"] = ManifestText(spec, pkg);
    for (const auto& [path, text] : smali) files["smali/" + path] = text;
    if (!spec.model_path.empty()) {
      std::string model = "TFL3";
      std::mt19937_64 rng(seed + index);
      for (int i = 0; i < 512; ++i) model += static_cast<char>(rng() & 0xff);
      files[spec.model_path] = model;
    }
    files["res/raw/notes.txt"] = "release notes for " + spec.name + "\n";
    if (spec.kind == AppKind::kNonDl) {
      // Names that look close to model files without being one.
      files["assets/model.tflite.bak"] = "backup";
      files["assets/tflite_readme.md"] = "# notes\n";
      if (index % 2 == 0)
        files["smali/" + pkg + "/Probe.smali"] =
            Fill(".class public L{{PKG}}/Probe;\n.super Ljava/lang/Object;\n.source \"Probe.java\"\n\n\n"
                 "# static fields\n.field public static final REF:Ljava/lang/String; = "
                 "\"Lorg/tensorflow/litex/Helper;\"\n",
                 {{"PKG", pkg}});
    }

    fs::path out = corpus.apps_dir / (spec.archive ? spec.name + ".apk" : spec.name);
    if (spec.kind == AppKind::kUnscannable) {
      files.erase(spec.model_path);
      std::string bytes;
      if (spec.name.ends_with("truncated")) {
        bytes = ZipFiles(files);
        bytes.resize(bytes.size() * 3 / 5);
      } else if (spec.name.ends_with("encrypted")) {
        scan::ZipWriter w;
        w.Add("AndroidManifest.xml", files["AndroidManifest.xml"]);
        for (const auto& [name, data] : files)
          if (name.starts_with("smali/")) w.AddEncrypted(name, data);
        w.AddEncrypted("classes.dex", "dex\n035\0");
        bytes = w.Finish();
      } else {
        scan::ZipWriter w;
        w.Add("AndroidManifest.xml", files["AndroidManifest.xml"]);
        for (const auto& [name, data] : files)
          if (name.starts_with("smali/")) w.Add(name, data, false);
        bytes = w.Finish();
        Flip(&bytes, "# direct methods");
      }
      WriteFile(out, bytes);
    } else if (spec.archive) {
      WriteFile(out, ZipFiles(files));
    } else {
      for (const auto& [name, data] : files) WriteFile(out / name, data);
    }
    truth.path = out.string();
    corpus.apps.push_back(std::move(truth));
  }
  std::sort(corpus.apps.begin(), corpus.apps.end(),
            [](const CorpusApp& a, const CorpusApp& b) { return a.path < b.path; });
  std::ofstream(root / "ground_truth.json") << corpus.ToJson().dump(2) << "\n";
  return corpus;
}

}  // namespace dlprep::testing
