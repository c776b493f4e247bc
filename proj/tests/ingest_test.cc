// Copyright 2026 The Domex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <set>
#include <string>
#include <vector>

#include "domex/corpus.h"
#include "domex/errors.h"
#include "domex/html.h"
#include "domex/synth.h"
#include "domex/text.h"
#include "gtest/gtest.h"
#include "testing.h"

namespace domex {
namespace {

using testing::TempDir;

// Text normalization and decoding.

TEST(TextTest, NormalizeCollapsesAndTrims) {
  EXPECT_EQ(NormalizeText("  a \t\n b  "), "a b");
  EXPECT_EQ(NormalizeText("\xc2\xa0x\xc2\xa0\xc2\xa0y"), "x y");  // NBSP
  EXPECT_EQ(NormalizeText(""), "");
}

TEST(TextTest, NormalizeAppliesNfc) {
  // "e" + combining acute composes to U+00E9.
  EXPECT_EQ(NormalizeText("caf" "e\xcc\x81"), "caf\xc3\xa9");
}

TEST(TextTest, LowerAndCodePoints) {
  EXPECT_EQ(ToLower("MSRP \xc3\x89t\xc3\xa9"), "msrp \xc3\xa9t\xc3\xa9");
  EXPECT_EQ(SplitCodePoints("a\xc3\xa9z"), (std::vector<std::string>{"a", "\xc3\xa9", "z"}));
}

TEST(TextTest, DecodeFallsBackToLatin1) {
  // 0xE9 alone is invalid UTF-8 and decodes as Latin-1 e-acute.
  EXPECT_EQ(DecodeHtmlBytes("<p>caf\xe9</p>"), "<p>caf\xc3\xa9</p>");
}

TEST(TextTest, DecodeHonorsDeclaredCharset) {
  const std::string html = "<meta charset=\"windows-1252\"><p>\x93q\x94</p>";
  EXPECT_EQ(SniffDeclaredCharset(html), "windows-1252");
  EXPECT_NE(DecodeHtmlBytes(html).find("\xe2\x80\x9cq\xe2\x80\x9d"), std::string::npos);
}

TEST(TextTest, BinaryInputIsUnreadable) {
  std::string bytes = "<p>";
  bytes.push_back('\0');
  bytes += "\x01\x02\x03\x04";
  try {
    DecodeHtmlBytes(bytes);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnreadableInput);
  }
}

TEST(HtmlTest, DecodesEntities) {
  EXPECT_EQ(DecodeEntities("a &amp; b &lt;&#65;&#x42;&gt; &nbsp;"), "a & b <AB> \xc2\xa0");
  EXPECT_EQ(DecodeEntities("&unknown; &"), "&unknown; &");
}

// parse_page.

TEST(ParsePageTest, EmptyBodyHasNoNodes) {
  EXPECT_TRUE(ParsePage("<html><body></body></html>", "0", "s").nodes.empty());
}

TEST(ParsePageTest, DocumentOrderXPaths) {
  const Page page =
      ParsePage("<html><body><h1>A</h1><div><span>B</span></div></body></html>", "0", "s");
  ASSERT_EQ(page.nodes.size(), 2u);
  EXPECT_EQ(page.nodes[0], (DomNode{"/html[1]/body[1]/h1[1]", "A", "h1", 0}));
  EXPECT_EQ(page.nodes[1], (DomNode{"/html[1]/body[1]/div[1]/span[1]", "B", "span", 1}));
}

TEST(ParsePageTest, MixedContentSplitsDirectText) {
  const Page page = ParsePage("<body><p>x<b>y</b></p></body>", "0", "s");
  ASSERT_EQ(page.nodes.size(), 2u);
  EXPECT_EQ(page.nodes[0], (DomNode{"/html[1]/body[1]/p[1]", "x", "p", 0}));
  EXPECT_EQ(page.nodes[1], (DomNode{"/html[1]/body[1]/p[1]/b[1]", "y", "b", 1}));
}

TEST(ParsePageTest, DirectTextChunksJoin) {
  const Page page = ParsePage("<body><p>x <b>y</b> z</p></body>", "0", "s");
  ASSERT_EQ(page.nodes.size(), 2u);
  EXPECT_EQ(page.nodes[0].text, "x z");
  EXPECT_EQ(page.nodes[1].text, "y");
}

TEST(ParsePageTest, SkipsScriptStyleAndComments) {
  const Page page = ParsePage(
      "<html><head><style>p{}</style><script>var a = '<b>no</b>';</script></head>"
      "<body><!-- <p>gone</p> --><p>kept</p></body></html>",
      "0", "s");
  ASSERT_EQ(page.nodes.size(), 1u);
  EXPECT_EQ(page.nodes[0].text, "kept");
}

TEST(ParsePageTest, SiblingIndicesCountSameTag) {
  const Page page = ParsePage(
      "<body><div>a</div><span>b</span><div>c</div><div><i>d</i><i>e</i></div></body>", "0",
      "s");
  std::vector<std::string> xpaths;
  for (const DomNode &n : page.nodes) xpaths.push_back(n.xpath);
  EXPECT_EQ(xpaths, (std::vector<std::string>{
                        "/html[1]/body[1]/div[1]", "/html[1]/body[1]/span[1]",
                        "/html[1]/body[1]/div[2]", "/html[1]/body[1]/div[3]/i[1]",
                        "/html[1]/body[1]/div[3]/i[2]"}));
}

TEST(ParsePageTest, ImpliedEndTagsAndVoidElements) {
  const Page page = ParsePage("<body><ul><li>one<li>two</ul><p>a<br>b<p>c</body>", "0", "s");
  std::vector<std::string> got;
  for (const DomNode &n : page.nodes) got.push_back(n.xpath + "=" + n.text);
  EXPECT_EQ(got, (std::vector<std::string>{
                     "/html[1]/body[1]/ul[1]/li[1]=one", "/html[1]/body[1]/ul[1]/li[2]=two",
                     "/html[1]/body[1]/p[1]=a b", "/html[1]/body[1]/p[2]=c"}));
}

TEST(ParsePageTest, MalformedMarkupIsTolerated) {
  const Page page = ParsePage("<html><body><div><span>a</div></span><b>b", "0", "s");
  ASSERT_EQ(page.nodes.size(), 2u);
  EXPECT_EQ(page.nodes[0].text, "a");
  EXPECT_EQ(page.nodes[1].text, "b");
}

// Property: parsing is deterministic, xpaths are unique and ordinals dense,
// over generated pages.
TEST(ParsePageTest, GeneratedPagesKeepInvariants) {
  SynthSpec spec;
  spec.n_sites = 3;
  spec.pages_per_site = 10;
  for (const auto &[path, content] : GenerateSyntheticFiles(spec)) {
    if (path.find(".htm") == std::string::npos) continue;
    const Page a = ParsePage(content, "p", "s");
    const Page b = ParsePage(content, "p", "s");
    ASSERT_EQ(a.nodes, b.nodes) << path;
    std::set<std::string> xpaths;
    for (size_t i = 0; i < a.nodes.size(); ++i) {
      EXPECT_EQ(a.nodes[i].ordinal, static_cast<int>(i));
      EXPECT_FALSE(a.nodes[i].text.empty());
      EXPECT_EQ(a.nodes[i].text, NormalizeText(a.nodes[i].text));
      xpaths.insert(a.nodes[i].xpath);
    }
    EXPECT_EQ(xpaths.size(), a.nodes.size()) << path;
  }
}

// Property: random tag soup never throws and keeps the invariants.
TEST(ParsePageTest, RandomTagSoup) {
  Rng rng(7);
  const std::vector<std::string> pieces = {"<div>", "</div>", "<p>",  "</p>",  "<b>", "</b>",
                                           "<li>",  "<br>",   "text", " ",     "&amp;", "<!--",
                                           "-->",   "<td>",   "<tr>", "</table>", "<table>", "x"};
  for (int round = 0; round < 300; ++round) {
    std::string html = "<html><body>";
    const int n = rng.Int(0, 40);
    for (int i = 0; i < n; ++i) html += rng.Pick(pieces);
    const Page page = ParsePage(html, "p", "s");
    std::set<std::string> xpaths;
    for (size_t i = 0; i < page.nodes.size(); ++i) {
      EXPECT_EQ(page.nodes[i].ordinal, static_cast<int>(i));
      EXPECT_FALSE(page.nodes[i].text.empty());
      xpaths.insert(page.nodes[i].xpath);
    }
    EXPECT_EQ(xpaths.size(), page.nodes.size()) << html;
  }
}

// load_vertical.

void WriteSite(const std::filesystem::path &root, const std::string &site,
               const std::vector<std::string> &pages) {
  for (size_t i = 0; i < pages.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%04zu.htm", i);
    WriteFile(root / "auto" / site / name, pages[i]);
  }
}

VerticalSchema AutoSchema() { return {"auto", {"model", "price"}}; }

TEST(LoadVerticalTest, CountsAndTruth) {
  TempDir dir("load");
  const std::filesystem::path root = dir.path();
  WriteSite(root, "b-site", {"<p>x</p>", "<p>y</p>", "<p>z</p>"});
  WriteSite(root, "a-site", {"<h1>Toyota Corolla</h1><p>$9,970</p>", "<p>q</p>", "<p>r</p>"});
  for (const std::string site : {"a-site", "b-site"}) {
    WriteFile(root / "auto" / "groundtruth" / (site + "-model.txt"),
              "auto\t" + site + "\tmodel\n0000\t1\tToyota Corolla\n0001\t0\t<NULL>\n");
    WriteFile(root / "auto" / "groundtruth" / (site + "-price.txt"),
              "auto\t" + site + "\tprice\n0000\t2\t$9,970\t$9970\n");
  }
  LoadReport report;
  const std::vector<SiteCorpus> sites = LoadVertical(root, AutoSchema(), &report);
  ASSERT_EQ(sites.size(), 2u);
  EXPECT_EQ(sites[0].site_id, "a-site");
  EXPECT_EQ(sites[1].site_id, "b-site");
  EXPECT_EQ(sites[0].pages.size(), 3u);
  EXPECT_EQ(sites[1].pages.size(), 3u);
  EXPECT_EQ(sites[0].pages[0].page_id, "0000");
  EXPECT_EQ(sites[0].pages[0].truth.at("model"), std::set<std::string>{"Toyota Corolla"});
  EXPECT_EQ(sites[0].pages[0].truth.at("price"), (std::set<std::string>{"$9,970", "$9970"}));
  EXPECT_TRUE(sites[0].pages[1].truth.at("model").empty());
  EXPECT_TRUE(report.missing_truth_files.empty());
}

TEST(LoadVerticalTest, MissingTruthFileIsFlagged) {
  TempDir dir("missing-truth");
  WriteSite(dir.path(), "s", {"<p>x</p>"});
  WriteFile(dir.path() / "auto" / "groundtruth" / "s-model.txt", "h\n0000\t1\tx\n");
  LoadReport report;
  const std::vector<SiteCorpus> sites = LoadVertical(dir.path(), AutoSchema(), &report);
  EXPECT_EQ(report.missing_truth_files, std::vector<std::string>{"s/price"});
  EXPECT_TRUE(sites[0].pages[0].truth.at("price").empty());
}

TEST(LoadVerticalTest, MissingPageIsAnError) {
  TempDir dir("missing-page");
  WriteSite(dir.path(), "s", {"<p>x</p>"});
  WriteFile(dir.path() / "auto" / "groundtruth" / "s-model.txt", "h\n0007\t1\tx\n");
  try {
    LoadVertical(dir.path(), AutoSchema());
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingPage);
    EXPECT_NE(std::string(e.what()).find("0007"), std::string::npos);
  }
}

TEST(LoadVerticalTest, EmptyCorpus) {
  TempDir dir("empty");
  try {
    LoadVertical(dir.path(), AutoSchema());
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCorpusEmpty);
  }
}

TEST(SchemaTest, Validate) {
  EXPECT_NO_THROW((VerticalSchema{"v", {"a", "b"}}.Validate()));
  EXPECT_THROW((VerticalSchema{"v", {}}.Validate()), Error);
  EXPECT_THROW((VerticalSchema{"v", {"a", "a"}}.Validate()), Error);
  EXPECT_EQ((VerticalSchema{"v", {"a", "b"}}.FieldIndex("b")), 1);
  EXPECT_EQ((VerticalSchema{"v", {"a", "b"}}.FieldIndex("c")), -1);
}

// match_truth_nodes.

TEST(MatchTruthTest, SingleMatch) {
  Page page = testing::MakePage("s", "0", {{"/html[1]/b[1]", "MSRP :"},
                                           {"/html[1]/b[2]", "$9,970"}});
  page.truth["price"] = {"$9,970"};
  const TruthMatch m = MatchTruthNodes(page, {"auto", {"price"}});
  EXPECT_EQ(m.field_nodes[0], std::vector<int>{1});
  EXPECT_EQ(m.unmatched_fields, 0);
}

TEST(MatchTruthTest, NoMatchIsCounted) {
  Page page = testing::MakePage("s", "0", {{"/html[1]/b[1]", "x"}});
  page.truth["price"] = {"$1"};
  const TruthMatch m = MatchTruthNodes(page, {"auto", {"price"}});
  EXPECT_TRUE(m.field_nodes[0].empty());
  EXPECT_EQ(m.unmatched_fields, 1);
}

TEST(MatchTruthTest, ConflictGoesToEarliestField) {
  Page page = testing::MakePage("s", "0", {{"/html[1]/b[1]", "2000"}, {"/html[1]/b[2]", "2000"}});
  page.truth["year"] = {"2000"};
  page.truth["price"] = {"2000"};
  const TruthMatch m = MatchTruthNodes(page, {"auto", {"year", "price"}});
  EXPECT_EQ(m.field_nodes[0], (std::vector<int>{0, 1}));
  EXPECT_TRUE(m.field_nodes[1].empty());
  EXPECT_EQ(m.conflicts, 2);
  EXPECT_EQ(NodeLabels(page, {"auto", {"year", "price"}}), (std::vector<int>{0, 0}));
}

// Property: matching equals a brute-force scan over random pages.
TEST(MatchTruthTest, AgreesWithBruteForce) {
  Rng rng(11);
  const std::vector<std::string> texts = {"a", "b", "c", "d", "a b", " a  b ", "e"};
  const VerticalSchema schema{"v", {"f0", "f1", "f2"}};
  for (int round = 0; round < 200; ++round) {
    std::vector<std::pair<std::string, std::string>> nodes;
    const int n = rng.Int(0, 12);
    for (int i = 0; i < n; ++i) {
      nodes.emplace_back("/html[1]/p[" + std::to_string(i + 1) + "]",
                         NormalizeText(rng.Pick(texts)));
    }
    Page page = testing::MakePage("s", "0", nodes);
    for (const std::string &f : schema.fields) {
      const int values = rng.Int(0, 2);
      for (int v = 0; v < values; ++v) page.truth[f].insert(rng.Pick(texts));
    }
    const TruthMatch m = MatchTruthNodes(page, schema);
    std::vector<std::vector<int>> expected(3);
    for (int i = 0; i < n; ++i) {
      for (int f = 0; f < 3; ++f) {
        bool hit = false;
        for (const std::string &t : page.truth[schema.fields[f]]) {
          hit |= NormalizeText(t) == NormalizeText(page.nodes[i].text);
        }
        if (hit) {
          expected[f].push_back(i);
          break;
        }
      }
    }
    EXPECT_EQ(m.field_nodes, expected);
  }
}

TEST(CorpusCacheTest, RoundTripAndMagic) {
  SiteCorpus site;
  site.site_id = "s";
  site.vertical = {"v", {"a"}};
  site.pages.push_back(testing::MakePage("s", "0000", {{"/html[1]/p[1]", "x"}}));
  site.pages[0].truth["a"] = {"x"};
  const std::string bytes = SerializeCorpus({site});
  EXPECT_EQ(bytes.rfind("DOMEX-CORPUS-1", 0), 0u);
  const std::vector<SiteCorpus> back = DeserializeCorpus(bytes);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].pages[0].nodes, site.pages[0].nodes);
  EXPECT_EQ(back[0].pages[0].truth, site.pages[0].truth);
  EXPECT_EQ(back[0].vertical.fields, site.vertical.fields);
  EXPECT_THROW(DeserializeCorpus("NOT-A-CORPUS"), Error);
}

}  // namespace
}  // namespace domex
