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

#include "domex/synth.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "domex/errors.h"
#include "domex/rng.h"

namespace domex {

namespace {

const std::vector<std::string> kWords = {
    "river",   "garden",  "silent",  "winter", "shadow",  "golden",  "journey", "empire",
    "secret",  "ocean",   "forest",  "broken", "city",    "night",   "summer",  "kingdom",
    "stone",   "memory",  "light",   "storm",  "island",  "letters", "glass",   "hidden",
    "distant", "crimson", "quiet",   "ember",  "harbor",  "valley",  "lantern", "orchard",
    "paper",   "wild",    "iron",    "silver", "mountain", "dream",  "fire",    "house",
    "road",    "song",    "bridge",  "mirror", "garden",  "thief",   "north",   "south",
    "machine", "atlas",   "tide",    "echo",   "feather", "harvest", "canyon",  "meadow",
    "compass", "voyage",  "archive", "signal", "tower",   "market",  "circle",  "frontier",
    "ritual",  "copper",  "velvet",  "thunder", "willow", "cedar",   "delta",   "prairie"};

const std::vector<std::string> kFiller = {
    "the",     "a",       "of",     "and",     "with",     "story",   "reader",   "novel",
    "author",  "pages",   "about",  "family",  "through",  "world",   "years",    "finds",
    "young",   "life",    "after",  "history", "across",   "during",  "between",  "new",
    "classic", "edition", "tale",   "must",    "learn",    "war",     "love",     "truth",
    "first",   "last",    "small",  "town",    "vivid",    "portrait", "written", "sharp",
    "moving",  "debut",   "lyrical", "account", "readers",  "enjoyed", "recommend", "great",
    "loved",   "slow",    "ending", "characters", "plot",  "writing", "beautiful", "book"};

const std::vector<std::string> kFirstNames = {
    "Alice", "Bruno",  "Clara",  "Daniel", "Elena",  "Felix",  "Grace",  "Hugo",
    "Irene", "Jonas",  "Karin",  "Leo",    "Maya",   "Nadia",  "Oscar",  "Priya",
    "Quinn", "Rosa",   "Samuel", "Tara",   "Umar",   "Vera",   "Walter", "Yara",
    "Zoe",   "Arthur", "Beatriz", "Conor", "Dalia",  "Emil",   "Farah",  "Gideon"};

const std::vector<std::string> kLastNames = {
    "Moreno", "Baker",   "Chen",    "Dubois", "Evans",  "Fischer", "Garcia", "Hansen",
    "Ito",    "Jensen",  "Kowalski", "Larsen", "Meyer", "Novak",   "Okafor", "Patel",
    "Quinto", "Rossi",   "Silva",   "Tanaka", "Ueda",   "Varga",   "Weber",  "Xu",
    "Young",  "Zimmer",  "Abbott",  "Brandt", "Castro", "Dahl",    "Ellis",  "Fontaine"};

const std::vector<std::string> kPublishers = {
    "Harbor Press",    "Northwind Books", "Blue Lantern",  "Cedar House",  "Granite Editions",
    "Orchard Media",   "Paper Crane",     "Silver Birch",  "Tidewater",    "Vellum & Co",
    "Red Kite Press",  "Open Road",       "Lighthouse",    "Marble Arch",  "Foxglove"};

const std::vector<std::string> kMonths = {"January", "February", "March",     "April",
                                          "May",     "June",     "July",      "August",
                                          "September", "October", "November", "December"};

const std::vector<std::string> kNav = {"Home",      "Browse",   "New releases", "Bestsellers",
                                       "Gift cards", "Help",    "Sign in",      "Cart",
                                       "Deals",     "Children", "Audiobooks",   "Contact"};

const std::vector<std::vector<std::string>> kLabels = {
    {},
    {"Price", "Our price", "List price", "Cost", "Sale price"},
    {},
    {"ISBN", "ISBN-13", "ISBN 13", "Book number", "EAN"},
    {"Publisher", "Published by", "Imprint", "Press"},
    {"Pages", "Length", "Print length", "Page count"}};

enum Unit { kPriceUnit = 1, kBylineUnit = 2, kIsbnUnit = 3, kPublisherUnit = 4, kPagesUnit = 5 };

struct Template {
  std::string site_id;
  std::string site_name;
  std::vector<std::string> wrappers;
  int layout = 0;
  std::string value_tag;
  std::string title_tag;
  std::string date_tag;
  std::string name_tag;
  std::string review_tag;
  std::vector<std::string> labels;
  int date_format = 0;
  int price_format = 0;
  int isbn_format = 0;
  std::vector<int> units;
  std::vector<std::string> nav;
  std::string footer;
  std::string reviews_heading;
  std::string related_heading;
  bool related = false;
};

std::string Capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string Digits(Rng &rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.Below(10)));
  return s;
}

std::string Words(Rng &rng, const std::vector<std::string> &pool, int lo, int hi) {
  const int n = rng.Int(lo, hi);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += rng.Pick(pool);
  }
  return s;
}

std::string Title(Rng &rng) {
  const int n = rng.Int(2, 5);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += Capitalize(rng.Pick(kWords));
  }
  return s;
}

std::string Person(Rng &rng) { return rng.Pick(kFirstNames) + " " + rng.Pick(kLastNames); }

std::string Date(Rng &rng, int format) {
  const int year = rng.Int(1995, 2019);
  const int month = rng.Int(1, 12);
  const int day = rng.Int(1, 28);
  char buf[64];
  switch (format) {
    case 0:
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
      return buf;
    case 1:
      return kMonths[month - 1] + " " + std::to_string(day) + ", " + std::to_string(year);
    case 2:
      return std::to_string(day) + " " + kMonths[month - 1] + " " + std::to_string(year);
    default:
      std::snprintf(buf, sizeof(buf), "%02d/%02d/%04d", month, day, year);
      return buf;
  }
}

std::string Price(Rng &rng, int format) {
  static const char *kCents[] = {"99", "49", "00", "95", "50"};
  const std::string amount = std::to_string(rng.Int(5, 120)) + "." + kCents[rng.Below(5)];
  switch (format) {
    case 0:
      return "$" + amount;
    case 1:
      return "US$ " + amount;
    default:
      return amount + " USD";
  }
}

std::string Isbn(Rng &rng, int format) {
  const std::string d = "978" + Digits(rng, 10);
  if (format == 0) return d;
  return d.substr(0, 3) + "-" + d.substr(3, 1) + "-" + d.substr(4, 4) + "-" + d.substr(8, 4) +
         "-" + d.substr(12, 1);
}

Template MakeTemplate(Rng &rng, int index, int num_fields) {
  Template t;
  char id[32];
  std::snprintf(id, sizeof(id), "site-%02d", index);
  t.site_id = id;
  t.site_name = Capitalize(rng.Pick(kWords)) + " " + Capitalize(rng.Pick(kWords)) + " Books";
  static const std::vector<std::string> kWrappers = {"div", "section", "main", "article"};
  const int depth = rng.Int(1, 3);
  for (int i = 0; i < depth; ++i) t.wrappers.push_back(rng.Pick(kWrappers));
  t.layout = rng.Int(0, 3);
  t.value_tag = rng.Pick(std::vector<std::string>{"span", "em", "strong", "i"});
  t.title_tag = rng.Pick(std::vector<std::string>{"h1", "h2"});
  t.date_tag = rng.Pick(std::vector<std::string>{"span", "em", "time", "small"});
  t.name_tag = rng.Pick(std::vector<std::string>{"span", "b", "cite", "strong"});
  if (t.name_tag == t.date_tag) t.name_tag = "a";
  t.review_tag = rng.Pick(std::vector<std::string>{"div", "li"});
  const bool colon = rng.Bernoulli(0.5);
  t.labels.assign(kMaxSynthFields, "");
  for (int f = 0; f < kMaxSynthFields; ++f) {
    if (kLabels[f].empty()) continue;
    t.labels[f] = rng.Pick(kLabels[f]) + (colon ? ":" : "");
  }
  t.date_format = rng.Int(0, 3);
  t.price_format = rng.Int(0, 2);
  t.isbn_format = rng.Int(0, 1);

  std::vector<int> labeled = {kPriceUnit};
  if (num_fields > kIsbnUnit) labeled.push_back(kIsbnUnit);
  if (num_fields > kPublisherUnit) labeled.push_back(kPublisherUnit);
  if (num_fields > kPagesUnit) labeled.push_back(kPagesUnit);
  rng.Shuffle(labeled);
  // The byline sits before at least one labeled unit.
  const int slot = rng.Int(0, static_cast<int>(labeled.size()) - 1);
  t.units = labeled;
  t.units.insert(t.units.begin() + slot, kBylineUnit);

  std::vector<std::string> nav = kNav;
  rng.Shuffle(nav);
  nav.resize(rng.Int(4, 6));
  t.nav = nav;
  t.footer = "Copyright " + std::to_string(rng.Int(2005, 2020)) + " " + t.site_name +
             ". All rights reserved.";
  t.reviews_heading = rng.Pick(std::vector<std::string>{"Customer reviews", "Reviews",
                                                        "What readers say", "Reader reviews"});
  t.related_heading = rng.Pick(std::vector<std::string>{"You may also like", "Related titles",
                                                        "Customers also bought"});
  t.related = rng.Bernoulli(0.7);
  return t;
}

std::string Element(const std::string &tag, const std::string &text) {
  return "<" + tag + ">" + text + "</" + tag + ">";
}

std::string LabeledUnit(const Template &t, const std::string &label, const std::string &value) {
  switch (t.layout) {
    case 0:
      return "<div>" + Element("span", label) + " " + Element(t.value_tag, value) + "</div>\n";
    case 1:
      return "<table><tr>" + Element("td", label) + Element("td", value) + "</tr></table>\n";
    case 2:
      return "<dl>" + Element("dt", label) + Element("dd", value) + "</dl>\n";
    default:
      return "<p>" + Element("b", label) + " " + Element(t.value_tag, value) + "</p>\n";
  }
}

struct PageValues {
  std::map<int, std::string> fields;
  std::string html;
};

PageValues MakePage(const Template &t, const SynthSpec &spec, Rng &rng) {
  PageValues pv;
  pv.fields[0] = Title(rng);
  pv.fields[1] = Price(rng, t.price_format);
  pv.fields[2] = Date(rng, t.date_format);
  pv.fields[3] = Isbn(rng, t.isbn_format);
  pv.fields[4] = rng.Pick(kPublishers);
  pv.fields[5] = std::to_string(rng.Int(80, 900)) + " pages";

  std::string h = "<!DOCTYPE html>\n<html>\n<head><title>" + t.site_name +
                  "</title><meta charset=\"utf-8\"></head>\n<body>\n<div id=\"nav\"><ul>";
  for (const std::string &item : t.nav) h += "<li><a href=\"#\">" + item + "</a></li>";
  h += "</ul></div>\n";
  for (const std::string &w : t.wrappers) h += "<" + w + ">\n";
  h += Element(t.title_tag, pv.fields[0]) + "\n";
  for (int unit : t.units) {
    if (unit == kBylineUnit) {
      h += "<div class=\"byline\">" + Element("p", Words(rng, kFiller, 12, 20) + ".") +
           Element(t.name_tag, Person(rng)) + " " + Element(t.date_tag, pv.fields[2]) +
           "</div>\n";
    } else {
      h += LabeledUnit(t, t.labels[unit], pv.fields[unit]);
    }
  }
  static const char *kStock[] = {"In stock", "Only a few left", "Ships in 2 days",
                                 "Ships in 5 days", "Out of stock"};
  h += "<p class=\"stock\">" + std::string(kStock[rng.Below(5)]) + "</p>\n";
  h += "<span class=\"rating\">" + std::to_string(rng.Int(1, 4)) + "." +
       std::to_string(rng.Int(0, 9)) + " out of 5</span>\n";
  for (auto it = t.wrappers.rbegin(); it != t.wrappers.rend(); ++it) h += "</" + *it + ">\n";

  if (t.related) {
    h += "<div class=\"related\">" + Element("h4", t.related_heading) + "<ul>";
    for (int i = 0; i < 3; ++i) h += "<li><a href=\"#\">" + Title(rng) + "</a></li>";
    h += "</ul></div>\n";
  }
  if (spec.decoys) {
    const int n = rng.Int(spec.min_decoys, spec.max_decoys);
    const bool list = t.review_tag == "li";
    h += "<div class=\"reviews\">" + Element("h3", t.reviews_heading) + (list ? "<ul>" : "<div>");
    for (int i = 0; i < n; ++i) {
      std::string date;
      do {
        date = Date(rng, t.date_format);
      } while (date == pv.fields[2]);
      h += "<" + t.review_tag + ">" + Element(t.name_tag, Person(rng)) + " " +
           Element(t.date_tag, date) + Element("p", Words(rng, kFiller, 10, 16) + ".") + "</" +
           t.review_tag + ">";
    }
    h += list ? "</ul>" : "</div>";
    h += "</div>\n";
  }
  h += "<div id=\"footer\"><p>" + t.footer + "</p></div>\n</body>\n</html>\n";
  pv.html = std::move(h);
  return pv;
}

}  // namespace

VerticalSchema SynthSchema(const SynthSpec &spec) {
  if (spec.num_fields < 1 || spec.num_fields > kMaxSynthFields) {
    throw Error(ErrorKind::kUsage, "synthetic field count must be in [1, 6]");
  }
  VerticalSchema schema;
  schema.vertical_name = spec.vertical;
  for (int f = 0; f < spec.num_fields; ++f) schema.fields.push_back(kSynthFields[f]);
  return schema;
}

std::vector<std::pair<std::string, std::string>> GenerateSyntheticFiles(const SynthSpec &spec) {
  const VerticalSchema schema = SynthSchema(spec);
  if (spec.n_sites < 1 || spec.pages_per_site < 1) {
    throw Error(ErrorKind::kUsage, "synthetic corpus needs sites and pages");
  }
  if (spec.decoys && (spec.min_decoys < 0 || spec.max_decoys < spec.min_decoys)) {
    throw Error(ErrorKind::kUsage, "bad decoy range");
  }
  Rng rng(spec.seed);
  std::map<std::string, std::string> files;
  std::string conf = "# Synthetic vertical\nvertical = " + spec.vertical + "\nfields = ";
  for (int f = 0; f < spec.num_fields; ++f) conf += (f ? "," : "") + schema.fields[f];
  files[spec.vertical + ".conf"] = conf + "\n";
  for (int s = 0; s < spec.n_sites; ++s) {
    const Template t = MakeTemplate(rng, s, spec.num_fields);
    std::vector<std::string> truth(spec.num_fields);
    for (int f = 0; f < spec.num_fields; ++f) {
      truth[f] = spec.vertical + "\t" + t.site_id + "\t" + schema.fields[f] + "\n";
    }
    for (int p = 0; p < spec.pages_per_site; ++p) {
      char page_id[16];
      std::snprintf(page_id, sizeof(page_id), "%04d", p);
      PageValues pv = MakePage(t, spec, rng);
      files[spec.vertical + "/" + t.site_id + "/" + page_id + ".htm"] = std::move(pv.html);
      for (int f = 0; f < spec.num_fields; ++f) {
        truth[f] += std::string(page_id) + "\t1\t" + pv.fields[f] + "\n";
      }
    }
    for (int f = 0; f < spec.num_fields; ++f) {
      files[spec.vertical + "/groundtruth/" + t.site_id + "-" + schema.fields[f] + ".txt"] =
          truth[f];
    }
  }
  return {files.begin(), files.end()};
}

VerticalSchema WriteSyntheticCorpus(const SynthSpec &spec, const std::filesystem::path &root) {
  for (const auto &[path, content] : GenerateSyntheticFiles(spec)) WriteFile(root / path, content);
  return SynthSchema(spec);
}

}  // namespace domex
