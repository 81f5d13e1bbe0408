# Copyright 2026 The termset Authors.
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

"""Regenerates the toy corpus (toy.conllu, toy.txt) and its gold dataset.

The corpus is template-generated, POS-tagged English about programming
languages, cities (including the New York variants) and fruit. Output is
deterministic for a fixed seed:

    python3 data/toy/make_toy.py
"""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

LANGUAGES = ["Java", "Python", "Ruby", "Perl", "Scala", "Haskell", "JavaScript",
             "Kotlin", "Rust", "Erlang", "PHP", "Fortran"]
CITIES = ["London", "Paris", "Tokyo", "Berlin", "Madrid", "Rome", "Chicago",
          "Boston", "Sydney", "Toronto"]
NEW_YORK = [["New", "York"], ["New-York"], ["NY"], ["New", "York", "City"], ["NYC"]]
FRUITS = ["apples", "bananas", "oranges", "pears", "grapes", "cherries",
          "mangoes", "plums", "peaches", "lemons"]

# Templates: lists of (surface, tag) with slots "X", "Y", "Z" filled from the
# class. Slot tags come from the class.
LANGUAGE_TEMPLATES = [
    "She/PRP writes/VBZ programs/NNS in/IN X ./.",
    "The/DT team/NN switched/VBD from/IN X to/TO Y ./.",
    "We/PRP compared/VBD X ,/, Y and/CC Z for/IN the/DT project/NN ./.",
    "Should/MD we/PRP use/VB X or/CC Y ?/.",
    "The/DT compiler/NN for/IN X is/VBZ fast/JJ ./.",
    "He/PRP learned/VBD X at/IN university/NN ./.",
    "Our/PRP$ service/NN is/VBZ written/VBN in/IN X ./.",
    "The/DT course/NN covers/VBZ X ,/, Y ,/, Z and/CC W ./.",
    "Many/JJ startups/NNS still/RB choose/VBP X over/IN Y ./.",
]
CITY_TEMPLATES = [
    "We/PRP flew/VBD to/TO X last/JJ summer/NN ./.",
    "The/DT office/NN in/IN X is/VBZ open/JJ ./.",
    "Tourists/NNS visit/VBP X ,/, Y and/CC Z every/DT year/NN ./.",
    "She/PRP moved/VBD from/IN X to/TO Y ./.",
    "The/DT museum/NN in/IN X was/VBD crowded/JJ ./.",
    "He/PRP lives/VBZ in/IN X or/CC Y ./.",
    "Flights/NNS to/TO X are/VBP cheap/JJ ./.",
    "The/DT tour/NN stops/VBZ in/IN X ,/, Y ,/, Z and/CC W ./.",
]
FRUIT_TEMPLATES = [
    "I/PRP bought/VBD X at/IN the/DT market/NN ./.",
    "The/DT farm/NN grows/VBZ X ,/, Y and/CC Z ./.",
    "She/PRP ate/VBD X for/IN breakfast/NN ./.",
    "Eat/VB X or/CC Y daily/RB ./.",
    "The/DT price/NN of/IN X rose/VBD ./.",
    "The/DT shop/NN sells/VBZ X ,/, Y ,/, Z and/CC W ./.",
    "They/PRP picked/VBD X in/IN the/DT orchard/NN ./.",
]
FILLER_TEMPLATES = [
    "The/DT meeting/NN ended/VBD early/RB ./.",
    "Our/PRP$ manager/NN approved/VBD the/DT budget/NN ./.",
    "The/DT weather/NN was/VBD cold/JJ ./.",
    "A/DT new/JJ report/NN arrived/VBD today/NN ./.",
    "The/DT library/NN closes/VBZ at/IN noon/NN ./.",
]


def fill(template, members, tag, rng):
    """Fills each slot with a distinct member."""
    slots = [tok for tok in template.split() if tok in ("X", "Y", "Z", "W")]
    picks = rng.sample(range(len(members)), len(slots))
    chosen = dict(zip(["X", "Y", "Z", "W"], picks))
    tokens = []
    for tok in template.split():
        if tok in chosen:
            member = members[chosen[tok]]
            words = member if isinstance(member, list) else [member]
            tokens.extend((w, tag) for w in words)
        else:
            surface, pos = tok.rsplit("/", 1)
            tokens.append((surface, pos))
    return tokens


def main():
    rng = random.Random(7)
    cities = [[c] for c in CITIES] + NEW_YORK
    sentences = []
    for _ in range(160):
        sentences.append(fill(rng.choice(LANGUAGE_TEMPLATES), LANGUAGES, "NNP", rng))
    for _ in range(160):
        sentences.append(fill(rng.choice(CITY_TEMPLATES), cities, "NNP", rng))
    for _ in range(120):
        sentences.append(fill(rng.choice(FRUIT_TEMPLATES), FRUITS, "NNS", rng))
    for _ in range(60):
        sentences.append(fill(rng.choice(FILLER_TEMPLATES), [], "NN", rng))
    rng.shuffle(sentences)

    per_doc = 10
    conllu, text = [], []
    for d in range(0, len(sentences), per_doc):
        conllu.append("# newdoc id = toy%d" % (d // per_doc))
        block = []
        for sentence in sentences[d:d + per_doc]:
            for i, (surface, pos) in enumerate(sentence, start=1):
                conllu.append("%d\t%s\t_\t_\t%s\t_\t_\t_\t_\t_" % (i, surface, pos))
            conllu.append("")
            block.append(" ".join(s for s, _ in sentence))
        text.append(" ".join(block))
    with open(os.path.join(HERE, "toy.conllu"), "w") as f:
        f.write("\n".join(conllu) + "\n")
    with open(os.path.join(HERE, "toy.txt"), "w") as f:
        f.write("\n\n".join(text) + "\n")

    gold = [
        {"name": "programming languages", "gold": LANGUAGES, "seeds": ["Java", "Python"]},
        {"name": "cities", "gold": CITIES + ["New York"], "seeds": ["London", "Paris"]},
        {"name": "fruit", "gold": FRUITS, "seeds": ["apples", "bananas"]},
    ]
    with open(os.path.join(HERE, "toy_gold.jsonl"), "w") as f:
        for category in gold:
            f.write(json.dumps(category) + "\n")


if __name__ == "__main__":
    main()
