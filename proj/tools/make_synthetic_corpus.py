# Copyright 2026 The narc Authors.
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
"""Writes the bundled synthetic corpus in RACE JSON layout.

Every passage mentions all options of both of its questions, so a
bag-of-words scorer sees each option fully covered and falls back to its
tie rule. Option pools are disjoint from each other and from the query
wording. The output is fixed by the seed; rerunning overwrites the same files.

usage: make_synthetic_corpus.py OUT_DIR PARSES_JSONL
"""

import json
import pathlib
import random
import sys

NAMES = ["Tom", "Anna", "Lucy", "Peter", "Maria", "David", "Emma", "Jack",
         "Sara", "Kevin", "Nina", "Oscar", "Julia", "Henry", "Grace", "Leo"]
HELPERS = ["Uncle Walter", "Aunt Mabel", "Grandpa Eli", "Grandma Rose",
           "Mister Briggs", "Doctor Hale", "Coach Ramsey", "Nurse Ida",
           "Farmer Quinn", "Captain Moss", "Pilot Vera", "Judge Otis"]
ITEMS = ["kite", "lamp", "violin", "umbrella", "notebook", "helmet", "basket",
         "compass", "scarf", "teapot", "drum", "puzzle", "candle", "wallet",
         "telescope", "backpack"]
PLACES = ["market", "bakery", "museum", "harbor", "library", "stadium",
          "garden", "theater", "pharmacy", "cinema", "aquarium", "castle"]
DESTINATIONS = ["to the zoo", "to the beach", "to the farm", "to the circus",
                "to the lake", "to the forest", "to the island", "to the mountain"]
DOGS = ["Biscuit", "Pepper", "Rocket", "Waffles", "Ziggy", "Muffin", "Bandit",
        "Noodle", "Sprout", "Pickles"]
COLOURS = ["crimson", "turquoise", "amber", "violet", "olive", "silver",
           "coral", "indigo"]
WEEKDAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"]


def art(noun):
    return ("an " if noun[0] in "aeiou" else "a ") + noun


def pick(rng, pool, n, avoid=()):
    return rng.sample([x for x in pool if x not in avoid], n)


def what_bought(rng, name, place):
    items = pick(rng, ITEMS, 4)
    query = f"What did {name} buy at the {place}?"
    parse = (f"(ROOT (SBARQ (WHNP (WP What)) (SQ (VBD did) (NP (NNP {name})) "
             f"(VP (VB buy) (PP (IN at) (NP (DT the) (NN {place}))))) (. ?)))")
    facts = [f"At the {place} {name} looked at {art(items[0])} and {art(items[1])}.",
             f"There was also {art(items[2])} next to {art(items[3])}."]
    return query, [art(i) for i in items], facts, parse


def where_went(rng, name, place):
    dests = pick(rng, DESTINATIONS, 4)
    query = f"Where did {name} go after school?"
    parse = (f"(ROOT (SBARQ (WHADVP (WRB Where)) (SQ (VBD did) (NP (NNP {name})) "
             f"(VP (VB go) (PP (IN after) (NP (NN school))))) (. ?)))")
    spots = [d.removeprefix("to the ") for d in dests]
    facts = [f"Friends of {name} talked about trips {dests[0]} and {dests[1]}.",
             f"Others wanted to go {dests[2]} or {dests[3]} instead."]
    return query, dests, facts, parse


def who_gave(rng, name, place):
    helpers = pick(rng, HELPERS, 4)
    gift = rng.choice(ITEMS)
    query = f"Who gave {name} {art(gift)}?"
    parse = (f"(ROOT (SBARQ (WHNP (WP Who)) (SQ (VP (VBD gave) (NP (NNP {name})) "
             f"(NP (DT {art(gift).split()[0]}) (NN {gift})))) (. ?)))")
    facts = [f"{helpers[0]} and {helpers[1]} visited on the same day.",
             f"Later {helpers[2]} came with {helpers[3]}."]
    return query, helpers, facts, parse


def dog_name(rng, name, place):
    dogs = pick(rng, DOGS, 4)
    query = f"What is the name of {name}'s dog?"
    parse = (f"(ROOT (SBARQ (WHNP (WP What)) (SQ (VBZ is) (NP (NP (DT the) (NN name)) "
             f"(PP (IN of) (NP (NP (NNP {name}) (POS 's)) (NN dog))))) (. ?)))")
    facts = [f"The dogs in the street were {dogs[0]}, {dogs[1]}, {dogs[2]} and {dogs[3]}."]
    return query, dogs, facts, parse


def blank_place(rng, name, place):
    places = pick(rng, PLACES, 4, avoid=(place,))
    query = f"{name} went to the _ after school."
    facts = [f"The {places[0]} and the {places[1]} were both open late.",
             f"The {places[2]} was near the {places[3]}."]
    return query, places, facts, None


def blank_colour(rng, name, place):
    colours = pick(rng, COLOURS, 4)
    query = f"{name}'s favourite colour is _ ."
    facts = [f"The walls were painted {colours[0]} and {colours[1]}.",
             f"Some doors were {colours[2]} while others were {colours[3]}."]
    return query, colours, facts, None


def blank_day(rng, name, place):
    days = pick(rng, WEEKDAYS, 4)
    query = "The trip took place on _ ."
    facts = [f"Plans changed from {days[0]} to {days[1]}.",
             f"Nobody was free on {days[2]} or {days[3]}."]
    return query, days, facts, None


TEMPLATES = [what_bought, where_went, who_gave, dog_name,
             blank_place, blank_colour, blank_day]


def make_article(rng, index):
    name = NAMES[index % len(NAMES)]
    place = PLACES[(index * 5) % len(PLACES)]
    first, second = rng.sample(TEMPLATES, 2)
    questions, options, answers, parses = [], [], [], []
    body = [f"{name} spent a long afternoon near the {place}."]
    for q, template in enumerate((first, second)):
        query, opts, facts, parse = template(rng, name, place)
        letter = "ABCD"[(2 * index + q) % 4]
        questions.append(query)
        options.append(opts)
        answers.append(letter)
        parses.append(parse)
        body.extend(facts)
    body.append(f"It was a day {name} would remember for a long time.")
    doc = {
        "answers": answers,
        "options": options,
        "questions": questions,
        "article": " ".join(body),
        "id": f"synth{index:03d}.txt",
    }
    return doc, parses


def main(argv):
    if len(argv) != 3:
        sys.exit(__doc__)
    out_dir = pathlib.Path(argv[1])
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20261016)
    parse_lines = []
    for index in range(1, 101):
        doc, parses = make_article(rng, index)
        (out_dir / doc["id"]).write_text(json.dumps(doc, indent=1) + "\n")
        for q, parse in enumerate(parses):
            if parse is not None:
                parse_lines.append(json.dumps({"id": f"{doc['id']}:{q}", "parse": parse}))
    pathlib.Path(argv[2]).write_text("\n".join(parse_lines) + "\n")


if __name__ == "__main__":
    main(sys.argv)
