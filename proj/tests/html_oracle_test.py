# Copyright 2026 The Domex Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Compares the C++ leaf-node parser with Python's html.parser.

Usage: html_oracle_test.py <dump_nodes binary> <domex binary>

The reference builds a tree from well-formed pages with the standard
library tokenizer, then derives leaf nodes with the same rules: one node
per element with direct text, emitted at its first non-blank text chunk,
xpath steps indexed among same-tag siblings, script and style dropped.
It also evaluates every C++ xpath against its own tree.
"""

import json
import os
import subprocess
import sys
import tempfile
import unicodedata
from html.parser import HTMLParser

VOID = {"area", "base", "br", "col", "embed", "hr", "img", "input", "link",
        "meta", "param", "source", "track", "wbr"}
STRUCTURAL = {"html", "head", "body"}


def normalize(text):
    return unicodedata.normalize("NFC", " ".join(text.split()))


class Element:
    def __init__(self, tag):
        self.tag = tag
        self.children = []  # Element or str


class TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.doc = Element("#document")
        self.stack = [self.doc]
        self.open_structural = set()

    def _append(self, tag):
        element = Element(tag)
        if tag != "html" and not self.open_structural and self.stack[-1] is self.doc:
            html = Element("html")
            self.doc.children.append(html)
            self.stack.append(html)
            self.open_structural.add("html")
        self.stack[-1].children.append(element)
        return element

    def handle_starttag(self, tag, attrs):
        if tag in STRUCTURAL and tag in self.open_structural:
            return
        element = self._append(tag)
        if tag in STRUCTURAL:
            self.open_structural.add(tag)
        if tag not in VOID:
            self.stack.append(element)

    def handle_startendtag(self, tag, attrs):
        self._append(tag)

    def handle_endtag(self, tag):
        if tag in STRUCTURAL:
            return
        for k in range(len(self.stack) - 1, 0, -1):
            if self.stack[k].tag == tag:
                del self.stack[k:]
                return

    def handle_data(self, data):
        if self.stack[-1].tag in ("script", "style"):
            return
        self.stack[-1].children.append(data)

    def root(self):
        for child in self.doc.children:
            if isinstance(child, Element):
                return child
        return Element("html")


def leaf_nodes(element, xpath, out):
    direct = " ".join(c for c in element.children if isinstance(c, str))
    text = normalize(direct)
    emitted = not text
    counts = {}
    for child in element.children:
        if isinstance(child, str):
            if not emitted and normalize(child):
                out.append((xpath, text, element.tag))
                emitted = True
            continue
        counts[child.tag] = counts.get(child.tag, 0) + 1
        leaf_nodes(child, "%s/%s[%d]" % (xpath, child.tag, counts[child.tag]), out)


def reference(path):
    with open(path, encoding="utf-8") as f:
        builder = TreeBuilder()
        builder.feed(f.read())
        builder.close()
    root = builder.root()
    out = []
    leaf_nodes(root, "/%s[1]" % root.tag, out)
    return root, out


def all_text(element):
    parts = []
    for c in element.children:
        parts.append(c if isinstance(c, str) else all_text(c))
    return " ".join(parts)


def selects(element, text):
    # The full text contains the node text; for mixed content the node
    # text is the element's own direct text.
    direct = normalize(" ".join(c for c in element.children if isinstance(c, str)))
    return text in normalize(all_text(element)) or text == direct


def evaluate_xpath(root, xpath):
    steps = xpath.strip("/").split("/")
    name, index = steps[0].rstrip("]").split("[")
    if name != root.tag or index != "1":
        return None
    node = root
    for step in steps[1:]:
        name, index = step.rstrip("]").split("[")
        matches = [c for c in node.children if isinstance(c, Element) and c.tag == name]
        if int(index) > len(matches):
            return None
        node = matches[int(index) - 1]
    return node


SNIPPETS = [
    "<html><body><h1>A</h1><div><span>B</span></div></body></html>",
    "<html><body><p>x<b>y</b></p></body></html>",
    "<html><body><p>x <b>y</b> z <i>w</i> v</p></body></html>",
    "<html><head><title>T &amp; U</title><style>p {}</style></head>"
    "<body><!-- c --><div>a<br>b</div><img src='x'/><p>&lt;tag&gt; &#233;t&eacute;</p>"
    "<script>var s = '<p>no</p>';</script><ul><li>1</li><li>2</li></ul></body></html>",
    "<html><body><table><tr><td>k</td><td>v</td></tr><tr><td>k2</td><td>v2</td></tr>"
    "</table><div><div><span>deep</span></div></div></body></html>",
    "<html><body>  spaced  out \n text <em>café</em></body></html>",
]


def main():
    dump_nodes, domex = sys.argv[1], sys.argv[2]
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run([domex, "synth", "--out", tmp, "--sites", "4", "--pages", "15",
                        "--fields", "6", "--seed", "5"], check=True, stdout=subprocess.DEVNULL)
        files = []
        for dirpath, _, names in os.walk(tmp):
            files += [os.path.join(dirpath, n) for n in names if n.endswith(".htm")]
        for i, snippet in enumerate(SNIPPETS):
            path = os.path.join(tmp, "snippet%d.htm" % i)
            with open(path, "w", encoding="utf-8") as f:
                f.write(snippet)
            files.append(path)
        files.sort()
        out = subprocess.run([dump_nodes] + files, check=True, capture_output=True,
                             text=True).stdout
        got = {}
        for line in out.splitlines():
            row = json.loads(line)
            got.setdefault(row["file"], []).append((row["xpath"], row["text"], row["tag"]))
        failures = 0
        nodes = 0
        for path in files:
            root, expected = reference(path)
            actual = got.get(path, [])
            nodes += len(actual)
            if actual != expected:
                failures += 1
                print("MISMATCH %s" % path)
                for a, e in zip(actual, expected):
                    if a != e:
                        print("  c++: %r\n  ref: %r" % (a, e))
                        break
                print("  counts c++=%d ref=%d" % (len(actual), len(expected)))
                continue
            for xpath, text, _ in actual:
                element = evaluate_xpath(root, xpath)
                if element is None or not selects(element, text):
                    failures += 1
                    print("XPATH %s %s does not select %r" % (path, xpath, text))
                    break
        print("%d files, %d nodes, %d failures" % (len(files), nodes, failures))
        return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
