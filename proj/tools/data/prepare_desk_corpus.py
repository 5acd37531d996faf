#!/usr/bin/env python3
# Copyright 2026 The rwspell Authors.
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
"""Builds the desk-scale evaluation data under data/desk/.

Inputs (all public domain or permissively licensed):
  --web      unpacked npm package `world-english-bible` (json/*.json)
  --sotu     unpacked npm package `@stdlib/datasets-sotu` (data/*.txt,
             US State of the Union addresses 1790-2018)
  --pattern  unpacked sdist `pattern3-3.0.0` (Brill lexicon, contextual
             rules, WordNet noun index)

Outputs:
  train.txt     tokenized training sentences, one per line
  test.txt      10,000 held-out sentences (6..23 words) drawn from WEB
                paragraphs and whole addresses that training never sees
  treebank.txt  silver bracketed trees over training sentences of at most
                30 tokens (every other one) (shallow chunks, right-nested)
  nouns.txt     WordNet noun lemmas, one per line
"""

import argparse
import glob
import json
import os
import random
import re

PUNCT = set('.,;:!?()-"\'')
PUNCT_TAGS = {'.', ',', ':', '(', ')', '``', "''", '#', '$'}


def normalize(text):
    text = (text.replace('‘', "'").replace('’', "'")
            .replace('“', '"').replace('”', '"')
            .replace('—', ' -- ').replace('–', '-'))
    text = re.sub(r'[\[\]#¶‹›<>{}*_]', ' ', text)
    text = re.sub(r'"', ' ', text)
    return text


def tokenize(text):
    """Whitespace split; leading and trailing punctuation detached."""
    out = []
    for chunk in text.split():
        lead = []
        while chunk and chunk[0] in PUNCT:
            lead.append(chunk[0])
            chunk = chunk[1:]
        trail = []
        while chunk and chunk[-1] in PUNCT:
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        out.extend(lead)
        if chunk:
            out.append(chunk)
        out.extend(reversed(trail))
    return out


SENT_END = re.compile(r'(?<=[.?!])\s+(?=[A-Z\'"(])')


def split_sentences(text):
    return [s for s in SENT_END.split(text) if s.strip()]


def read_web(path):
    """Yields paragraphs (strings) in book order."""
    for f in sorted(glob.glob(os.path.join(path, 'json', '*.json'))):
        para = []
        for e in json.load(open(f, encoding='utf-8')):
            t = e.get('type')
            if t in ('paragraph text', 'line text'):
                para.append(e['value'])
            elif t in ('paragraph end', 'stanza end') and para:
                yield ' '.join(para)
                para = []
        if para:
            yield ' '.join(para)


def read_sotu(path):
    """Yields one address (string) at a time in chronological order."""
    for f in sorted(glob.glob(os.path.join(path, 'data', '*.txt'))):
        yield open(f, encoding='utf-8').read()


class BrillTagger:
    def __init__(self, pattern_root):
        en = os.path.join(pattern_root, 'pattern3', 'text', 'en')
        self.lexicon = {}
        for line in open(os.path.join(en, 'en-lexicon.txt'), encoding='utf-8'):
            if line.startswith(';;;'):
                continue
            parts = line.split()
            if len(parts) >= 2:
                self.lexicon[parts[0]] = parts[1]
        self.rules = []
        for line in open(os.path.join(en, 'en-context.txt'), encoding='utf-8'):
            if line.startswith(';;;'):
                continue
            parts = line.split()
            if len(parts) >= 4:
                self.rules.append(parts)

    def guess(self, word, first):
        if re.fullmatch(r'[0-9][0-9,.:]*', word):
            return 'CD'
        if word[0].isupper() and not first:
            return 'NNP'
        lw = word.lower()
        if lw.endswith('ing'):
            return 'VBG'
        if lw.endswith('ed'):
            return 'VBN'
        if lw.endswith('ly'):
            return 'RB'
        if lw.endswith('eth') or lw.endswith('est'):
            return 'VBZ'
        if lw.endswith('s') and not lw.endswith('ss'):
            return 'NNS'
        if word[0].isupper():
            return 'NNP'
        return 'NN'

    def tag(self, words):
        tags = []
        for i, w in enumerate(words):
            t = self.lexicon.get(w)
            if t is None and i == 0:
                t = self.lexicon.get(w.lower())
            if t is None:
                t = self.lexicon.get(w.lower()) if not w[0].isupper() else None
            if t is None:
                t = self.guess(w, i == 0)
            tags.append(t)
        n = len(words)

        def T(j):
            return tags[j] if 0 <= j < n else 'STAART'

        def W(j):
            return words[j] if 0 <= j < n else 'STAART'

        for r in self.rules:
            src, dst, kind, args = r[0], r[1], r[2], r[3:]
            for i in range(n):
                if tags[i] != src:
                    continue
                a = args[0]
                b = args[1] if len(args) > 1 else None
                ok = {
                    'PREVTAG': lambda: T(i - 1) == a,
                    'NEXTTAG': lambda: T(i + 1) == a,
                    'PREV2TAG': lambda: T(i - 2) == a,
                    'NEXT2TAG': lambda: T(i + 2) == a,
                    'PREV1OR2TAG': lambda: a in (T(i - 1), T(i - 2)),
                    'NEXT1OR2TAG': lambda: a in (T(i + 1), T(i + 2)),
                    'PREV1OR2OR3TAG': lambda: a in (T(i - 1), T(i - 2), T(i - 3)),
                    'NEXT1OR2OR3TAG': lambda: a in (T(i + 1), T(i + 2), T(i + 3)),
                    'SURROUNDTAG': lambda: T(i - 1) == a and T(i + 1) == b,
                    'PREVBIGRAM': lambda: T(i - 2) == a and T(i - 1) == b,
                    'NEXTBIGRAM': lambda: T(i + 1) == a and T(i + 2) == b,
                    'PREVWD': lambda: W(i - 1) == a,
                    'NEXTWD': lambda: W(i + 1) == a,
                    'CURWD': lambda: W(i) == a,
                    'PREV1OR2WD': lambda: a in (W(i - 1), W(i - 2)),
                    'NEXT1OR2WD': lambda: a in (W(i + 1), W(i + 2)),
                    'WDPREVTAG': lambda: T(i - 1) == a and W(i) == b,
                    'WDNEXTTAG': lambda: W(i) == a and T(i + 1) == b,
                    'RBIGRAM': lambda: W(i) == a and W(i + 1) == b,
                    'LBIGRAM': lambda: W(i - 1) == a and W(i) == b,
                    'WDAND2AFT': lambda: W(i) == a and W(i + 2) == b,
                    'WDAND2TAGAFT': lambda: W(i) == a and T(i + 2) == b,
                    'WDAND2TAGBFR': lambda: T(i - 2) == a and W(i) == b,
                }.get(kind)
                if ok is not None and ok():
                    tags[i] = dst
        return tags


NOUN = {'NN', 'NNS', 'NNP', 'NNPS'}
DET = {'DT', 'PDT', 'PRP$', 'WP$', 'CD'}
ADJ = {'JJ', 'JJR', 'JJS'}
VERB = {'VB', 'VBD', 'VBG', 'VBN', 'VBP', 'VBZ'}


ESCAPES = {'(': '-LRB-', ')': '-RRB-'}


def leaf(tag, word):
    return '(%s %s)' % (ESCAPES.get(tag, tag), ESCAPES.get(word, word))


def nest(label, items):
    """Right-nested binary constituent over already-bracketed items."""
    if len(items) == 1:
        return '(%s %s)' % (label, items[0])
    return '(%s %s %s)' % (label, items[0], nest(label, items[1:]))


def chunk(words, tags):
    """Greedy shallow chunking into NP / VP / PP / ADJP / ADVP."""
    n = len(words)
    out = []
    i = 0

    def np_at(j):
        k = j
        while k < n and tags[k] in DET:
            k += 1
        while k < n and tags[k] in ADJ:
            k += 1
        m = k
        while m < n and tags[m] in NOUN:
            m += 1
        if m > k:
            if m < n and tags[m] == 'POS':
                m += 1
                while m < n and tags[m] in NOUN:
                    m += 1
            return m
        if j < n and tags[j] in ('PRP', 'EX', 'WP'):
            return j + 1
        if k > j and k - 1 >= j and tags[k - 1] in DET:
            return k
        return j

    while i < n:
        t = tags[i]
        e = np_at(i)
        if e > i:
            out.append(nest('NP', [leaf(tags[x], words[x]) for x in range(i, e)]))
            i = e
            continue
        if t in ('IN', 'TO'):
            e = np_at(i + 1)
            if e > i + 1:
                np = nest('NP', [leaf(tags[x], words[x]) for x in range(i + 1, e)])
                out.append('(PP %s %s)' % (leaf(t, words[i]), np))
                i = e
                continue
        if t in VERB or t == 'MD' or (t == 'TO' and i + 1 < n and tags[i + 1] in VERB):
            e = i
            while e < n and (tags[e] in VERB or tags[e] in ('MD', 'RB', 'RP')
                             or (tags[e] == 'TO' and e == i)):
                e += 1
            while e > i + 1 and tags[e - 1] == 'RB':
                e -= 1
            out.append(nest('VP', [leaf(tags[x], words[x]) for x in range(i, e)]))
            i = e
            continue
        if t in ADJ:
            e = i
            while e < n and tags[e] in ADJ:
                e += 1
            out.append(nest('ADJP', [leaf(tags[x], words[x]) for x in range(i, e)]))
            i = e
            continue
        if t in ('RB', 'RBR', 'RBS'):
            e = i
            while e < n and tags[e] in ('RB', 'RBR', 'RBS'):
                e += 1
            out.append(nest('ADVP', [leaf(tags[x], words[x]) for x in range(i, e)]))
            i = e
            continue
        out.append(leaf(t, words[i]))
        i += 1
    return out


def tree(words, tags):
    return nest('S', chunk(words, tags))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument('--web', required=True)
    ap.add_argument('--sotu', required=True)
    ap.add_argument('--pattern', required=True)
    ap.add_argument('--out', default='data/desk')
    ap.add_argument('--test-size', type=int, default=10000)
    ap.add_argument('--seed', type=int, default=20261019)
    args = ap.parse_args()

    tagger = BrillTagger(args.pattern)
    train, pool = [], []
    for pi, para in enumerate(read_web(args.web)):
        for s in split_sentences(normalize(para)):
            toks = tokenize(s)
            if not toks:
                continue
            (pool if pi % 5 in (1, 3) else train).append(toks)
    for ai, address in enumerate(read_sotu(args.sotu)):
        for s in split_sentences(normalize(address)):
            toks = tokenize(s)
            if toks:
                (pool if ai % 5 in (1, 3) else train).append(toks)

    def nwords(t):
        return sum(1 for x in t if x[0].isalnum())

    eligible = [t for t in pool if 6 <= nwords(t) <= 23]
    rng = random.Random(args.seed)
    test = rng.sample(eligible, args.test_size)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, 'train.txt'), 'w', encoding='utf-8') as f:
        for t in train:
            f.write(' '.join(t).lower() + '\n')
    with open(os.path.join(args.out, 'test.txt'), 'w', encoding='utf-8') as f:
        for t in test:
            f.write(' '.join(t).lower() + '\n')
    with open(os.path.join(args.out, 'treebank.txt'), 'w', encoding='utf-8') as f:
        # Every other short sentence; words with inner brackets cannot be
        # written as leaves.
        short = [t for t in train if len(t) <= 30
                 and not any(('(' in w or ')' in w) and len(w) > 1 for w in t)]
        for t in short[::2]:
            f.write(tree(t, tagger.tag(t)) + '\n')
    nouns = set()
    idx = os.path.join(args.pattern, 'pattern3', 'text', 'en', 'wordnet',
                       'dict', 'index.noun')
    for line in open(idx, encoding='utf-8', errors='replace'):
        if line.startswith(' '):
            continue
        lemma = line.split(' ', 1)[0]
        if re.fullmatch(r"[a-z][a-z'-]*", lemma):
            nouns.add(lemma)
    with open(os.path.join(args.out, 'nouns.txt'), 'w', encoding='utf-8') as f:
        for w in sorted(nouns):
            f.write(w + '\n')
    ntok = sum(len(t) for t in train)
    print('train sentences %d tokens %d; test sentences %d; nouns %d'
          % (len(train), ntok, len(test), len(nouns)))


if __name__ == '__main__':
    main()
