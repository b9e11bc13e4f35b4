# Copyright 2026 The MorphKit Authors.
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

"""Generates the synthetic fixtures under tests/data.

The data is Czech-flavoured but synthetic: paradigms are simplified and the
sentences are produced from a handful of templates. Re-running the script
reproduces the committed files byte for byte.

    python3 tools/fixtures/generate.py tests/data
"""

import random
import sys
from pathlib import Path

SEED = 20261016

# --------------------------------------------------------------------------
# Paradigms. Each generated entry is (form, lemma, upos, xpos, feats) where
# feats is a dict rendered in CoNLL-U order.

CASES = {"nom": "1", "gen": "2", "dat": "3", "acc": "4", "loc": "6", "ins": "7"}
CASE_FEAT = {"nom": "Nom", "gen": "Gen", "dat": "Dat", "acc": "Acc", "loc": "Loc", "ins": "Ins"}
GENDER_XPOS = {"masc_anim": "M", "masc_inan": "I", "fem": "F", "neut": "N"}
GENDER_FEAT = {"masc_anim": ("Masc", "Anim"), "masc_inan": ("Masc", "Inan"), "fem": ("Fem", None), "neut": ("Neut", None)}


def feats_string(feats):
    if not feats:
        return "_"
    return "|".join(f"{k}={feats[k]}" for k in sorted(feats))


def noun_feats(gender, number, case):
    g, anim = GENDER_FEAT[gender]
    f = {"Case": CASE_FEAT[case], "Gender": g, "Number": "Sing" if number == "sg" else "Plur", "Polarity": "Pos"}
    if anim:
        f["Animacy"] = anim
    return f


def noun_xpos(gender, number, case, proper=False):
    return "N" + ("N" if not proper else "N") + GENDER_XPOS[gender] + ("S" if number == "sg" else "P") + CASES[case] + "-----A----"


def fem_a(stem, dat_loc, gen_pl):
    return {
        ("sg", "nom"): stem + "a", ("sg", "gen"): stem + "y", ("sg", "dat"): dat_loc, ("sg", "acc"): stem + "u",
        ("sg", "loc"): dat_loc, ("sg", "ins"): stem + "ou",
        ("pl", "nom"): stem + "y", ("pl", "gen"): gen_pl, ("pl", "dat"): stem + "ám", ("pl", "acc"): stem + "y",
        ("pl", "loc"): stem + "ách", ("pl", "ins"): stem + "ami",
    }


def masc_inan(lemma, stem, loc):
    return {
        ("sg", "nom"): lemma, ("sg", "gen"): stem + "u", ("sg", "dat"): stem + "u", ("sg", "acc"): lemma,
        ("sg", "loc"): loc, ("sg", "ins"): stem + "em",
        ("pl", "nom"): stem + "y", ("pl", "gen"): stem + "ů", ("pl", "dat"): stem + "ům", ("pl", "acc"): stem + "y",
        ("pl", "loc"): stem + "ech", ("pl", "ins"): stem + "y",
    }


def masc_anim(lemma, stem, nom_pl):
    return {
        ("sg", "nom"): lemma, ("sg", "gen"): stem + "a", ("sg", "dat"): stem + "ovi", ("sg", "acc"): stem + "a",
        ("sg", "loc"): stem + "ovi", ("sg", "ins"): stem + "em",
        ("pl", "nom"): nom_pl, ("pl", "gen"): stem + "ů", ("pl", "dat"): stem + "ům", ("pl", "acc"): stem + "y",
        ("pl", "loc"): stem + "ech", ("pl", "ins"): stem + "y",
    }


def neut_o(stem, loc, gen_pl):
    return {
        ("sg", "nom"): stem + "o", ("sg", "gen"): stem + "a", ("sg", "dat"): stem + "u", ("sg", "acc"): stem + "o",
        ("sg", "loc"): loc, ("sg", "ins"): stem + "em",
        ("pl", "nom"): stem + "a", ("pl", "gen"): gen_pl, ("pl", "dat"): stem + "ům", ("pl", "acc"): stem + "a",
        ("pl", "loc"): stem + "ech", ("pl", "ins"): stem + "y",
    }


FEM = [("kočk", "kočce", "koček"), ("žen", "ženě", "žen"), ("škol", "škole", "škol"), ("knih", "knize", "knih"),
       ("ryb", "rybě", "ryb"), ("lamp", "lampě", "lamp"), ("sestr", "sestře", "sester"),
       ("hvězd", "hvězdě", "hvězd"), ("vod", "vodě", "vod"), ("cest", "cestě", "cest"),
       ("zahrad", "zahradě", "zahrad"), ("hor", "hoře", "hor"), ("stran", "straně", "stran"),
       ("rodin", "rodině", "rodin"), ("matk", "matce", "matek"), ("řek", "řece", "řek"), ("dívk", "dívce", "dívek")]
MASC_INAN = [("hrad", "hrad", "hradě"), ("stůl", "stol", "stole"), ("most", "most", "mostě"), ("les", "les", "lese"),
             ("dům", "dom", "domě"), ("vlak", "vlak", "vlaku"), ("strom", "strom", "stromě"),
             ("obchod", "obchod", "obchodě"), ("zákon", "zákon", "zákoně"), ("park", "park", "parku"),
             ("svět", "svět", "světě"), ("rok", "rok", "roce"), ("jazyk", "jazyk", "jazyce")]
MASC_ANIM = [("student", "student", "studenti"), ("pán", "pán", "páni"), ("soused", "soused", "sousedé"),
             ("pes", "ps", "psi"), ("chlap", "chlap", "chlapi"), ("kamarád", "kamarád", "kamarádi"),
             ("profesor", "profesor", "profesoři"), ("bratr", "bratr", "bratři")]
NEUT = [("měst", "městě", "měst"), ("okn", "okně", "oken"), ("slov", "slově", "slov"), ("aut", "autě", "aut"),
        ("kol", "kole", "kol"), ("jablk", "jablku", "jablek"), ("divadl", "divadle", "divadel"),
        ("míst", "místě", "míst")]
PROPER = [("Praha", "fem", fem_a("Prah", "Praze", "Prah")), ("Ostrava", "fem", fem_a("Ostrav", "Ostravě", "Ostrav")),
          ("Jana", "fem", fem_a("Jan", "Janě", "Jan")), ("Brno", "neut", neut_o("Brn", "Brně", "Brn")),
          ("Karel", "masc_anim", masc_anim("Karel", "Karl", "Karlové")),
          ("Petr", "masc_anim", masc_anim("Petr", "Petr", "Petrové")),
          ("Novák", "masc_anim", masc_anim("Novák", "Novák", "Nováci"))]

ADJ = ["nov", "star", "mlad", "velk", "mal", "krásn", "rychl", "pomal", "dlouh", "vysok", "čern", "bíl", "zelen",
       "modr", "chytr", "tich", "levn", "drah", "těžk", "slab"]
ADJ_SUPERLATIVE = {"nov": "nejnovější", "star": "nejstarší", "mlad": "nejmladší", "velk": "největší",
                   "mal": "nejmenší", "krásn": "nejkrásnější", "levn": "nejlevnější", "drah": "nejdražší"}
ADJ_ENDINGS = {
    ("masc_anim", "sg", "nom"): "ý", ("masc_inan", "sg", "nom"): "ý", ("fem", "sg", "nom"): "á", ("neut", "sg", "nom"): "é",
    ("masc_anim", "sg", "acc"): "ého", ("masc_inan", "sg", "acc"): "ý", ("fem", "sg", "acc"): "ou", ("neut", "sg", "acc"): "é",
    ("masc_anim", "sg", "loc"): "ém", ("masc_inan", "sg", "loc"): "ém", ("fem", "sg", "loc"): "é", ("neut", "sg", "loc"): "ém",
    ("masc_anim", "pl", "nom"): "í", ("masc_inan", "pl", "nom"): "é", ("fem", "pl", "nom"): "é", ("neut", "pl", "nom"): "á",
}

VERB_AT = ["děl", "hled", "vol", "ček", "zpív", "zn", "poslouch", "odpovíd", "vstáv", "zavír", "pozor", "obědv"]
VERB_IT = ["pros", "vař", "uč", "mluv", "nos", "chod", "kup", "ztrat", "vrát", "bydl"]
IRREGULAR = [
    ("jsem", "být", "1", "sg"), ("jsi", "být", "2", "sg"), ("je", "být", "3", "sg"), ("jsme", "být", "1", "pl"),
    ("jste", "být", "2", "pl"), ("jsou", "být", "3", "pl"), ("mám", "mít", "1", "sg"), ("máš", "mít", "2", "sg"),
    ("má", "mít", "3", "sg"), ("mají", "mít", "3", "pl"), ("jdu", "jít", "1", "sg"), ("jde", "jít", "3", "sg"),
    ("jdou", "jít", "3", "pl"), ("stojí", "stát-2", "3", "sg"), ("stojím", "stát-2", "1", "sg"),
    ("chce", "chtít", "3", "sg"), ("chtějí", "chtít", "3", "pl"), ("čte", "číst", "3", "sg"), ("čtou", "číst", "3", "pl"),
]
PERSON_ENDINGS_AT = {("1", "sg"): "ám", ("2", "sg"): "áš", ("3", "sg"): "á", ("1", "pl"): "áme", ("2", "pl"): "áte", ("3", "pl"): "ají"}
PERSON_ENDINGS_IT = {("1", "sg"): "ím", ("2", "sg"): "íš", ("3", "sg"): "í", ("1", "pl"): "íme", ("2", "pl"): "íte", ("3", "pl"): "í"}


def verb_entry(form, lemma, person, number, negative=False):
    feats = {"Mood": "Ind", "Number": "Sing" if number == "sg" else "Plur", "Person": person,
             "Polarity": "Neg" if negative else "Pos", "Tense": "Pres", "VerbForm": "Fin", "Voice": "Act"}
    xpos = "VB-" + ("S" if number == "sg" else "P") + "---" + person + "P-" + ("N" if negative else "A") + "A---"
    return (form, lemma, "VERB", xpos, feats)


def adj_entry(form, lemma, gender, number, case, degree="Pos"):
    g, anim = GENDER_FEAT[gender]
    feats = {"Case": CASE_FEAT[case], "Degree": degree, "Gender": g, "Number": "Sing" if number == "sg" else "Plur",
             "Polarity": "Pos"}
    if anim:
        feats["Animacy"] = anim
    xpos = "AA" + GENDER_XPOS[gender] + ("S" if number == "sg" else "P") + CASES[case] + "----" + (
        "1" if degree == "Pos" else "3") + "A----"
    return (form, lemma, "ADJ", xpos, feats)


class Lexicon:
    def __init__(self):
        self.nouns = []  # (lemma, gender, forms, proper)
        self.adjectives = []  # (stem, lemma)
        self.verbs = []  # (lemma, endings table, stem)
        self.entries = []

    def add(self, entry):
        self.entries.append(entry)


def build_lexicon(rng):
    lex = Lexicon()
    # A few lemmas carry PDT-style disambiguation suffixes.
    suffixed = {"hrad": "hrad-1", "kol": "kolo-1", "rok": "rok-1", "pán": "pán-1", "vol": "volat-1"}
    for stem, dat_loc, gen_pl in FEM:
        lex.nouns.append((stem + "a", "fem", fem_a(stem, dat_loc, gen_pl), False))
    for lemma, stem, loc in MASC_INAN:
        lex.nouns.append((suffixed.get(lemma, lemma), "masc_inan", masc_inan(lemma, stem, loc), False))
    for lemma, stem, nom_pl in MASC_ANIM:
        lex.nouns.append((suffixed.get(lemma, lemma), "masc_anim", masc_anim(lemma, stem, nom_pl), False))
    for stem, loc, gen_pl in NEUT:
        lemma = stem + "o"
        lex.nouns.append((suffixed.get(stem, lemma), "neut", neut_o(stem, loc, gen_pl), False))
    for lemma, gender, forms in PROPER:
        lex.nouns.append((lemma, gender, forms, True))

    for lemma, gender, forms, proper in lex.nouns:
        for (number, case), form in forms.items():
            upos = "PROPN" if proper else "NOUN"
            lex.add((form, lemma, upos, noun_xpos(gender, number, case, proper), noun_feats(gender, number, case)))

    for stem in ADJ:
        lemma = stem + "ý"
        lex.adjectives.append((stem, lemma))
        for (gender, number, case), ending in ADJ_ENDINGS.items():
            lex.add(adj_entry(stem + ending, lemma, gender, number, case))
        if stem in ADJ_SUPERLATIVE:
            lex.add(adj_entry(ADJ_SUPERLATIVE[stem], lemma, "masc_inan", "sg", "nom", "Sup"))

    for stem in VERB_AT:
        lemma = suffixed.get(stem, stem + "at")
        lex.verbs.append((lemma, PERSON_ENDINGS_AT, stem))
    for stem in VERB_IT:
        lemma = stem + ("et" if stem == "bydl" else "it")
        lex.verbs.append((lemma, PERSON_ENDINGS_IT, stem))
    for lemma, endings, stem in lex.verbs:
        for (person, number), ending in endings.items():
            lex.add(verb_entry(stem + ending, lemma, person, number))
            lex.add(verb_entry("ne" + stem + ending, lemma, person, number, negative=True))
    for form, lemma, person, number in IRREGULAR:
        lex.add(verb_entry(form, lemma, person, number))
    lex.add(verb_entry("není", "být", "3", "sg", negative=True))

    # Casing oddities: abbreviations, mixed-case brands, headline capitals.
    for form, lemma in [("ČR", "ČR"), ("USA", "USA"), ("NATO", "NATO"), ("ČEZ", "ČEZ"), ("ČEZu", "ČEZ"),
                        ("iPhone", "iPhone"), ("iPhonu", "iPhone"), ("iPhonem", "iPhone"), ("McDonald", "McDonald"),
                        ("McDonaldu", "McDonald"), ("eBay", "eBay"), ("eBayi", "eBay"), ("KOČKA", "kočka"),
                        ("PRAHA", "Praha"), ("PRAZE", "Praha"), ("ŠKOLY", "škola")]:
        lex.add((form, lemma, "PROPN", "NNIS1-----A----", {"Case": "Nom", "Gender": "Masc", "Number": "Sing"}))
    return lex


def write_lexicon(lex, rng, path):
    seen = set()
    lines = []
    for form, lemma, *_ in lex.entries:
        if (form, lemma) not in seen:
            seen.add((form, lemma))
            lines.append(f"{form}\t{lemma}")
    # Sentence-initial capitalisation of ordinary entries.
    pool = [e for e in lex.entries if e[0].islower()]
    while len(lines) < 1000:
        form, lemma, *_ = rng.choice(pool)
        variant = form[0].upper() + form[1:]
        if (variant, lemma) not in seen:
            seen.add((variant, lemma))
            lines.append(f"{variant}\t{lemma}")
    lines = lines[:1000]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_dictionary(lex, path):
    seen = set()
    lines = []
    for form, lemma, upos, xpos, feats in lex.entries:
        if (form, lemma, xpos) not in seen:
            seen.add((form, lemma, xpos))
            lines.append(f"{form}\t{lemma}\t{xpos}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# Toy treebank.

class Tok:
    def __init__(self, form, lemma, upos, xpos, feats, head=0, deprel="_"):
        self.form, self.lemma, self.upos, self.xpos, self.feats = form, lemma, upos, xpos, feats
        self.head, self.deprel = head, deprel


def conllu_sentence(tokens, comments):
    out = list(comments)
    for i, t in enumerate(tokens, 1):
        head = "_" if t.head is None else str(t.head)
        out.append("\t".join([str(i), t.form, t.lemma, t.upos, t.xpos, feats_string(t.feats), head, t.deprel, "_", "_"]))
    return "\n".join(out) + "\n\n"


def noun_phrase(lex, rng, case, number, with_adj, nouns=None):
    lemma, gender, forms, proper = rng.choice(nouns or [n for n in lex.nouns if not n[3]])
    toks = []
    if with_adj and not proper and (gender, number, case) in ADJ_ENDINGS:
        stem, alemma = rng.choice(lex.adjectives)
        toks.append(Tok(*adj_entry(stem + ADJ_ENDINGS[(gender, number, case)], alemma, gender, number, case)))
    upos = "PROPN" if proper else "NOUN"
    toks.append(Tok(forms[(number, case)], lemma, upos, noun_xpos(gender, number, case, proper),
                    noun_feats(gender, number, case)))
    return toks, gender


def toy_sentence(lex, rng):
    """Returns tokens with heads; token indices are 1-based in the result."""
    toks = []

    def attach(phrase, head_index, deprel):
        # The last token of a phrase is its head; modifiers hang on it.
        start = len(toks) + 1
        toks.extend(phrase)
        head = start + len(phrase) - 1
        for i in range(start, head):
            toks[i - 1].head, toks[i - 1].deprel = head, "amod"
        toks[head - 1].head, toks[head - 1].deprel = head_index, deprel
        return head

    pending = []  # (token index, deprel) waiting for the verb position
    if rng.random() < 0.25:
        toks.append(Tok("dnes", "dnes", "ADV", "Db-------------", {}))
        pending.append((len(toks), "advmod"))
    number = "pl" if rng.random() < 0.3 else "sg"
    subj, _ = noun_phrase(lex, rng, "nom", number, rng.random() < 0.5)
    subj_head = attach(subj, -1, "nsubj")
    pending.append((subj_head, "nsubj"))
    if rng.random() < 0.2:
        toks.append(Tok("a", "a", "CCONJ", "J^-------------", {}))
        cc = len(toks)
        conj, _ = noun_phrase(lex, rng, "nom", "sg", False)
        conj_head = attach(conj, subj_head, "conj")
        toks[cc - 1].head, toks[cc - 1].deprel = conj_head, "cc"
        number = "pl"
    lemma, endings, stem = rng.choice(lex.verbs)
    toks.append(Tok(*verb_entry(stem + endings[("3", number)], lemma, "3", number)))
    verb = len(toks)
    toks[verb - 1].head, toks[verb - 1].deprel = 0, "root"
    for index, deprel in pending:
        toks[index - 1].head, toks[index - 1].deprel = verb, deprel
    obj, _ = noun_phrase(lex, rng, "acc", "sg", rng.random() < 0.5)
    attach(obj, verb, "obj")
    if rng.random() < 0.5:
        prep = rng.choice(["v", "na"])
        toks.append(Tok(prep, prep, "ADP", "RR--6----------", {"AdpType": "Prep", "Case": "Loc"}))
        adp = len(toks)
        loc, _ = noun_phrase(lex, rng, "loc", "sg", rng.random() < 0.3)
        loc_head = attach(loc, verb, "obl")
        toks[adp - 1].head, toks[adp - 1].deprel = loc_head, "case"
    toks.append(Tok(".", ".", "PUNCT", "Z:-------------", {}, verb, "punct"))
    first = toks[0]
    first.form = first.form[0].upper() + first.form[1:]
    return toks


def write_toy(lex, rng, path, count):
    parts = []
    for i in range(count):
        toks = toy_sentence(lex, rng)
        parts.append(conllu_sentence(toks, [f"# sent_id = toy-{i + 1}", "# text = " + " ".join(t.form for t in toks)]))
    path.write_text("".join(parts), encoding="utf-8")


# --------------------------------------------------------------------------
# Ablation corpus: words are random strings whose characters carry no tag
# information; the pretrained vectors do.

ABLATION_TAGS = ["NOUN", "VERB", "ADJ", "ADV", "ADP", "CCONJ"]


def random_word(rng, taken):
    letters = "abcdefghijklmnoprstuvyz"
    while True:
        w = "".join(rng.choice(letters) for _ in range(rng.randint(4, 8)))
        if w not in taken:
            taken.add(w)
            return w


def write_ablation(rng, conllu_path, we_path, sentences=500, dev=100, dim=16):
    taken = set()
    train_words = {t: [random_word(rng, taken) for _ in range(60)] for t in ABLATION_TAGS}
    dev_words = {t: [random_word(rng, taken) for _ in range(60)] for t in ABLATION_TAGS}
    parts = []
    for i in range(sentences):
        pool = train_words if i < sentences - dev else dev_words
        tokens = []
        for _ in range(rng.randint(5, 12)):
            tag = rng.choice(ABLATION_TAGS)
            form = rng.choice(pool[tag])
            tokens.append(Tok(form, form, tag, tag, {}, None, "_"))
        parts.append(conllu_sentence(tokens, [f"# sent_id = ablation-{i + 1}"]))
    conllu_path.write_text("".join(parts), encoding="utf-8")

    centroids = {t: [rng.gauss(0.0, 1.0) for _ in range(dim)] for t in ABLATION_TAGS}
    rows = []
    for pool in (train_words, dev_words):
        for tag, words in pool.items():
            for w in words:
                rows.append(w + " " + " ".join(f"{c + rng.gauss(0.0, 0.3):.4f}" for c in centroids[tag]))
    we_path.write_text(f"{len(rows)} {dim}\n" + "\n".join(rows) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# NER toy set with flat entities.

FIRST = [("Karel", "Karel"), ("Petr", "Petr"), ("Jana", "Jana"), ("Eva", "Eva"), ("Tomáš", "Tomáš")]
LAST = [("Novák", "Novák"), ("Dvořák", "Dvořák"), ("Svobodová", "Svobodová"), ("Černý", "Černý")]
CITY = [("Praze", "Praha"), ("Brně", "Brno"), ("Ostravě", "Ostrava"), ("Plzni", "Plzeň")]
COMPANY = [("Škodu", "Škoda"), ("Seznam", "Seznam"), ("ČEZ", "ČEZ")]


def write_ner(rng, conllu_path, entities_path, count=30):
    parts, blocks = [], []
    for i in range(count):
        toks, spans = [], []
        first = rng.choice(FIRST)
        toks.append(Tok(first[0], first[1], "PROPN", "NNMS1-----A----", {}))
        spans.append((1, 1, "pf"))
        if rng.random() < 0.6:
            last = rng.choice(LAST)
            toks.append(Tok(last[0], last[1], "PROPN", "NNMS1-----A----", {}))
            spans.append((2, 2, "ps"))
        if rng.random() < 0.5:
            toks.append(Tok("bydlí", "bydlet", "VERB", "VB-S---3P-AA---", {}))
            toks.append(Tok("v", "v", "ADP", "RR--6----------", {}))
            city = rng.choice(CITY)
            toks.append(Tok(city[0], city[1], "PROPN", "NNFS6-----A----", {}))
            spans.append((len(toks), len(toks), "gu"))
        else:
            toks.append(Tok("pracuje", "pracovat", "VERB", "VB-S---3P-AA---", {}))
            toks.append(Tok("pro", "pro", "ADP", "RR--4----------", {}))
            company = rng.choice(COMPANY)
            toks.append(Tok(company[0], company[1], "PROPN", "NNFS4-----A----", {}))
            spans.append((len(toks), len(toks), "if"))
        toks.append(Tok(".", ".", "PUNCT", "Z:-------------", {}))
        for t in toks:
            t.head = None
        parts.append(conllu_sentence(toks, [f"# sent_id = ner-{i + 1}"]))
        blocks.append("".join(f"{s} {e} {t}\n" for s, e, t in spans) + "\n")
    conllu_path.write_text("".join(parts), encoding="utf-8")
    entities_path.write_text("".join(blocks), encoding="utf-8")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    lex = build_lexicon(rng)
    write_lexicon(lex, rng, out / "sample_lexicon.tsv")
    write_dictionary(lex, out / "toy_dictionary.tsv")
    write_toy(lex, rng, out / "toy_train.conllu", 50)
    write_ablation(rng, out / "ablation.conllu", out / "ablation_we.txt")
    write_ner(rng, out / "ner_toy.conllu", out / "ner_toy.entities")


if __name__ == "__main__":
    main()
