#!/usr/bin/env python3
"""Regenerates the synthetic fixtures under tests/data.

The lexicon is a small hand-written slice of Czech inflection (regular
paradigms, a few irregular stems, sense-numbered function words, proper
nouns and abbreviations). Everything is seeded, so rerunning this script
reproduces the committed files byte for byte.

    python3 tests/data/make_fixtures.py
"""

import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

PUNCT_TAG = "Z:-------------"
NUM_TAG = "C=-------------"


def tag(pos, sub, gender="-", number="-", case="-", person="-", tense="-",
        grade="-", neg="-", voice="-", var="-"):
    t = pos + sub + gender + number + case + "--" + person + tense + grade + neg + voice + "--" + var
    assert len(t) == 15, t
    return t


# --- nouns -----------------------------------------------------------------

MASC_INAN = ["", "u", "u", "", "e", "u", "em", "y", "ů", "ům", "y", "y", "ech", "y"]
FEM = ["a", "y", "ě", "u", "o", "ě", "ou", "y", "", "ám", "y", "y", "ách", "ami"]
NEUT = ["o", "a", "u", "o", "o", "ě", "em", "a", "", "ům", "a", "a", "ech", "y"]
MASC_ANIM = ["", "a", "ovi", "a", "e", "ovi", "em", "i", "ů", "ům", "y", "i", "ech", "y"]

# (lemma, oblique stem, paradigm, gender, in_dictionary)
NOUNS = [
    ("hrad", "hrad", MASC_INAN, "I", True),
    ("most", "most", MASC_INAN, "I", True),
    ("strom", "strom", MASC_INAN, "I", True),
    ("les", "les", MASC_INAN, "I", True),
    ("zákon", "zákon", MASC_INAN, "I", True),
    ("úhel", "úhl", MASC_INAN, "I", True),
    ("stůl", "stol", MASC_INAN, "I", True),
    ("dům", "dom", MASC_INAN, "I", True),
    ("obchod", "obchod", MASC_INAN, "I", True),
    ("plán", "plán", MASC_INAN, "I", True),
    ("sýr", "sýr", MASC_INAN, "I", True),
    ("film", "film", MASC_INAN, "I", False),
    ("program", "program", MASC_INAN, "I", False),
    ("žena", "žen", FEM, "F", True),
    ("voda", "vod", FEM, "F", True),
    ("cesta", "cest", FEM, "F", True),
    ("lampa", "lamp", FEM, "F", True),
    ("mapa", "map", FEM, "F", True),
    ("káva", "káv", FEM, "F", True),
    ("sova", "sov", FEM, "F", False),
    ("chata", "chat", FEM, "F", True),
    ("město", "měst", NEUT, "N", True),
    ("kolo", "kol", NEUT, "N", True),
    ("slovo", "slov", NEUT, "N", True),
    ("auto", "aut", NEUT, "N", True),
    ("pivo", "piv", NEUT, "N", False),
    ("pán", "pán", MASC_ANIM, "M", True),
    ("student", "student", MASC_ANIM, "M", True),
    ("doktor", "doktor", MASC_ANIM, "M", True),
    ("prezident", "prezident", MASC_ANIM, "M", True),
]


def noun_forms(lemma, stem, paradigm, gender):
    out = []
    for i, ending in enumerate(paradigm):
        number = "S" if i < 7 else "P"
        case = str(i % 7 + 1)
        if i == 0 and paradigm is not FEM and paradigm is not NEUT:
            form = lemma
        elif i == 3 and paradigm is MASC_INAN:
            form = lemma
        else:
            form = stem + ending
        out.append((form, tag("N", "N", gender, number, case, neg="A")))
    return out


# --- adjectives ------------------------------------------------------------

ADJ_ENDINGS = {
    # (gender, number): endings for cases 1..7
    ("I", "S"): ["ý", "ého", "ému", "ý", "ý", "ém", "ým"],
    ("M", "S"): ["ý", "ého", "ému", "ého", "ý", "ém", "ým"],
    ("F", "S"): ["á", "é", "é", "ou", "á", "é", "ou"],
    ("N", "S"): ["é", "ého", "ému", "é", "é", "ém", "ým"],
    ("I", "P"): ["é", "ých", "ým", "é", "é", "ých", "ými"],
    ("M", "P"): ["í", "ých", "ým", "é", "í", "ých", "ými"],
    ("F", "P"): ["é", "ých", "ým", "é", "é", "ých", "ými"],
    ("N", "P"): ["á", "ých", "ým", "á", "á", "ých", "ými"],
}

ADJECTIVES = [
    ("mladý", "mlad", True),
    ("velký", "velk", True),
    ("nový", "nov", True),
    ("starý", "star", True),
    ("dobrý", "dobr", True),
    ("malý", "mal", True),
    ("krásný", "krásn", True),
    ("elektrický", "elektrick", True),
    ("rychlý", "rychl", False),
]


def adj_forms(stem):
    out = []
    for (gender, number), endings in ADJ_ENDINGS.items():
        for c, ending in enumerate(endings):
            form = stem + ending
            if gender == "M" and number == "P" and c in (0, 4):
                # soft plural: mladí, velcí are irregular; keep a synthetic -í
                form = stem + "í"
            out.append((form, tag("A", "A", gender, number, str(c + 1), grade="1", neg="A")))
    return out


# --- verbs -----------------------------------------------------------------

# lemma, 3sg present, 3pl present, past masc sg, past masc anim pl, past masc inan pl
VERBS = [
    ("vidět", "vidí", "vidí", "viděl", "viděli", "viděly", True),
    ("dělat", "dělá", "dělají", "dělal", "dělali", "dělaly", True),
    ("mít", "má", "mají", "měl", "měli", "měly", True),
    ("nést", "nese", "nesou", "nesl", "nesli", "nesly", True),
    ("psát", "píše", "píšou", "psal", "psali", "psaly", True),
    ("stavět", "staví", "staví", "stavěl", "stavěli", "stavěly", True),
    ("hledat", "hledá", "hledají", "hledal", "hledali", "hledaly", False),
]


def verb_forms(v, negated=False):
    lemma, sg, pl, past_sg, past_pl_m, past_pl_i, _ = v
    neg = "N" if negated else "A"
    pre = "ne" if negated else ""
    return {
        "pres_sg": (pre + sg, tag("V", "B", number="S", person="3", tense="P", neg=neg, voice="A")),
        "pres_pl": (pre + pl, tag("V", "B", number="P", person="3", tense="P", neg=neg, voice="A")),
        "past_sg": (pre + past_sg, tag("V", "p", "Y", "S", person="X", tense="R", neg=neg, voice="A")),
        "past_pl_m": (pre + past_pl_m, tag("V", "p", "M", "P", person="X", tense="R", neg=neg, voice="A")),
        "past_pl_i": (pre + past_pl_i, tag("V", "p", "T", "P", person="X", tense="R", neg=neg, voice="A")),
    }


# --- closed classes --------------------------------------------------------

# preposition form -> (lemma, case)
PREPS = {
    "v": ("v-1", "6"),
    "s": ("s-1", "7"),
    "k": ("k-1", "3"),
    "do": ("do-1", "2"),
    "z": ("z-1", "2"),
    "na": ("na-1", None),  # 4 or 6
}

FUNCTION_WORDS = [
    # form, lemma (with MorfFlex-style comment), tag
    ("ještě", "ještě-1", "TT-------------"),
    ("ještě", "ještě-2", "Db-------------"),
    ("jak", "jak-1", "J,-------------"),
    ("jak", "jak-2", "Db-------------"),
    ("jak", "jak-3", "TT-------------"),
    ("a", "a-1", "J^-------------"),
    ("ale", "ale", "J^-------------"),
    ("také", "také", "Db-------------"),
    ("nedaleko", "daleko-1", "Db-------------"),
    ("jehož", "jehož_^(přivlast.)", "P9ZS2FS3-------"),
    ("jenž", "jenž_^(který)", "PJYS1----------"),
]

PROPER = [
    # form, lemma (raw MorfFlex with comment), tag
    ("Praha", "Praha_;G", "NNFS1-----A----"),
    ("Prahy", "Praha_;G", "NNFS2-----A----"),
    ("Praze", "Praha_;G", "NNFS3-----A----"),
    ("Prahu", "Praha_;G", "NNFS4-----A----"),
    ("Praze", "Praha_;G", "NNFS6-----A----"),
    ("Prahou", "Praha_;G", "NNFS7-----A----"),
    ("Kristus", "Kristus-3_;Y", "NNMS1-----A----"),
    ("Krista", "Kristus-3_;Y", "NNMS2-----A----"),
    ("Krista", "Kristus-3_;Y", "NNMS4-----A----"),
    ("Kristu", "Kristus-3_;Y", "NNMS3-----A----"),
    ("Kristem", "Kristus-3_;Y", "NNMS7-----A----"),
    ("Lincoln", "Lincoln-3_;Y", "NNMS1-----A----"),
    ("Lincolna", "Lincoln-3_;Y", "NNMS2-----A----"),
    ("Pierce", "Pierce_;Y", "NNMS1-----A----"),
    ("Piercem", "Pierce_;Y", "NNMS7-----A----"),
]
for c in "12346":
    PROPER.append(("Lovochemie", "Lovochemie_;K", "NNFS" + c + "-----A----"))

ABBREVIATIONS = [
    ("mg", "miligram_:B", "NNIXX-----A---8"),
    ("g", "gram_:B", "NNIXX-----A---8"),
    ("kpt", "kapitán_:B", "NNMXX-----A---8"),
    ("MW", "megawatt_:B", "NNIXX-----A---8"),
    ("Út", "úterý_:B", "NNNXX-----A---8"),
    ("So", "sobota_:B", "NNFXX-----A---8"),
    ("el", "elektrický_:B", "AAXXX----1A---8"),
    ("Angl", "Anglie_;G_:B", "NNFXX-----A---8"),
    ("Kan", "Kanada_;G_:B", "NNFXX-----A---8"),
    ("Nig", "Nigérie_;G_:B", "NNFXX-----A---8"),
    ("kateg", "kategorie_:B", "NNFXX-----A---8"),
    ("Maď", "Maďarsko_;G_:B", "NNNXX-----A---8"),
]


def strip(lemma):
    return lemma.split("_", 1)[0]


def dictionary_entries():
    """(form, raw MorfFlex lemma, tag) triples of the fixture dictionary."""
    entries = []
    for lemma, stem, paradigm, gender, in_dict in NOUNS:
        if not in_dict:
            continue
        for form, t in noun_forms(lemma, stem, paradigm, gender):
            entries.append((form, lemma, t))
    for lemma, stem, in_dict in ADJECTIVES:
        if not in_dict:
            continue
        for form, t in adj_forms(stem):
            entries.append((form, lemma, t))
    for v in VERBS:
        if not v[-1]:
            continue
        for negated in (False, True):
            for form, t in verb_forms(v, negated).values():
                entries.append((form, v[0], t))
    for form, (lemma, case) in PREPS.items():
        cases = [case] if case else ["4", "6"]
        for c in cases:
            entries.append((form, lemma, tag("R", "R", case=c)))
    entries.extend(FUNCTION_WORDS)
    entries.extend(PROPER)
    entries.extend(ABBREVIATIONS)
    for p in ".,":
        entries.append((p, p, PUNCT_TAG))
    # a deliberately ambiguous homograph: "stavění" style collisions are rare
    # in the fixture, so add an extra sense for "most" (bridge vs. must).
    entries.append(("most", "most-2_^(mošt)", "NNIS1-----A----"))
    seen = set()
    out = []
    for e in entries:
        if e not in seen:
            seen.add(e)
            out.append(e)
    return out


# --- sentence generator ----------------------------------------------------

NOUN_BY_CASE = {}


def build_noun_table():
    for lemma, stem, paradigm, gender, _ in NOUNS:
        forms = noun_forms(lemma, stem, paradigm, gender)
        for form, t in forms:
            NOUN_BY_CASE.setdefault((lemma, t[3], t[4]), (form, t))


build_noun_table()


def adj_form(stem_entry, gender, number, case):
    lemma, stem, _ = stem_entry
    for form, t in adj_forms(stem):
        if t[2] == gender and t[3] == number and t[4] == case:
            return form, lemma, t
    raise KeyError((lemma, gender, number, case))


def np(rng, case, number=None, allow_adj=True):
    noun = rng.choice(NOUNS)
    lemma, _, _, gender, _ = noun
    number = number or rng.choice("SP")
    toks = []
    if allow_adj and rng.random() < 0.5:
        a = rng.choice(ADJECTIVES)
        form, alemma, t = adj_form(a, gender, number, case)
        toks.append((form, alemma, t))
    form, t = NOUN_BY_CASE[(lemma, number, case)]
    toks.append((form, lemma, t))
    return toks, gender, number


def pp(rng):
    prep = rng.choice(list(PREPS))
    plemma, case = PREPS[prep]
    if case is None:
        case = rng.choice("46")
    # proper nouns occasionally fill the locative slot
    if prep == "v" and rng.random() < 0.3:
        return [(prep, plemma, tag("R", "R", case=case)), ("Praze", "Praha", "NNFS6-----A----")]
    toks, _, _ = np(rng, case)
    return [(prep, plemma, tag("R", "R", case=case))] + toks


def sentence(rng):
    toks = []
    r = rng.random()
    if r < 0.12:
        toks.append(("ještě", "ještě-2", "Db-------------"))
    elif r < 0.2:
        toks.append(("jak", "jak-2", "Db-------------"))
    if rng.random() < 0.1:
        subj = [("Kristus", "Kristus-3", "NNMS1-----A----")]
        gender, number = "M", "S"
    elif rng.random() < 0.08:
        subj = [("Lovochemie", "Lovochemie", "NNFS1-----A----")]
        gender, number = "F", "S"
    else:
        subj, gender, number = np(rng, "1")
    toks.extend(subj)
    v = rng.choice(VERBS)
    negated = rng.random() < 0.15
    forms = verb_forms(v, negated)
    if gender in "MI" and rng.random() < 0.5:
        if number == "S":
            vf = forms["past_sg"]
        else:
            vf = forms["past_pl_m" if gender == "M" else "past_pl_i"]
    else:
        vf = forms["pres_sg" if number == "S" else "pres_pl"]
    toks.append((vf[0], v[0], vf[1]))
    if rng.random() < 0.7:
        obj, _, _ = np(rng, "4")
        toks.extend(obj)
    if rng.random() < 0.6:
        toks.extend(pp(rng))
    if rng.random() < 0.1:
        toks.append((",", ",", PUNCT_TAG))
        toks.append(("a", "a-1", "J^-------------"))
        digit = rng.choice("123456789")
        toks.append((digit, digit, NUM_TAG))
        toks.append(rng.choice([("mg", "miligram", "NNIXX-----A---8"), ("g", "gram", "NNIXX-----A---8"),
                                ("MW", "megawatt", "NNIXX-----A---8")]))
    toks.append((".", ".", PUNCT_TAG))
    # sentence-initial capitalization
    f, l, t = toks[0]
    toks[0] = (f[0].upper() + f[1:], l, t)
    return toks


UPOS = {"N": "NOUN", "A": "ADJ", "V": "VERB", "R": "ADP", "Z": "PUNCT", "D": "ADV",
        "J": "CCONJ", "T": "PART", "C": "NUM", "P": "PRON"}


def upos(t, lemma):
    if t[0] == "N" and lemma[:1].isupper():
        return "PROPN"
    return UPOS.get(t[0], "X")


def write_conllu(path, sentences, gold=True, prefix="s"):
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        for i, toks in enumerate(sentences, 1):
            out.write(f"# sent_id = {prefix}{i}\n")
            text = ""
            for j, (f, _, _) in enumerate(toks):
                if j and toks[j][0] not in ".,":
                    text += " "
                text += f
            out.write(f"# text = {text}\n")
            for j, (f, l, t) in enumerate(toks, 1):
                nxt = toks[j][0] if j < len(toks) else None
                misc = "SpaceAfter=No" if nxt in (".", ",") or nxt is None else "_"
                if gold:
                    out.write(f"{j}\t{f}\t{l}\t{upos(t, l)}\t_\t{t}\t_\t_\t_\t{misc}\n")
                else:
                    out.write(f"{j}\t{f}\t_\t_\t_\t_\t_\t_\t_\t{misc}\n")
            out.write("\n")


def roundtrip_fixture(rng, count):
    """CoNLL-U with comments, multiword tokens, empty nodes and odd columns."""
    lines = []
    for i in range(1, count + 1):
        toks = sentence(rng)
        lines.append("# newdoc id = rt" if i == 1 else None)
        lines.append(f"# sent_id = rt-{i}")
        lines.append("# text = " + " ".join(f for f, _, _ in toks))
        rows = []
        if i % 5 == 0:
            # "Abych" = aby + bych
            lines.append("1-2\tAbych\t_\t_\t_\t_\t_\t_\t_\t_")
            rows.append(("aby", "aby", "SCONJ", "J,-------------", "_", "0", "mark", "_", "_"))
            rows.append(("bych", "být", "AUX", "Vc-S---1-------", "Mood=Cnd|Number=Sing|Person=1", "0", "aux", "_", "_"))
        for f, l, t in toks:
            rows.append((f, l, upos(t, l), t, "_", "_", "_", "_", "_"))
        for j, row in enumerate(rows, 1):
            f, l, u, t, feats, head, deprel, deps, misc = row
            if i % 7 == 0 and j == len(rows):
                misc = "SpaceAfter=No|Note=x"
            if i % 3 == 0 and f == ".":
                head, deprel = "1", "punct"
            lines.append(f"{j}\t{f}\t{l}\t{u}\t{feats}\t{t}\t{head}\t{deprel}\t{deps}\t{misc}")
            if i % 11 == 0 and j == 1:
                lines.append("1.1\tvidí\tvidět\tVERB\t_\t_\t_\t_\t0:root\t_")
        lines.append("")
    with open(os.path.join(HERE, "roundtrip.conllu"), "w", encoding="utf-8", newline="\n") as out:
        for line in lines:
            if line is not None:
                out.write(line + "\n")


def lemma_pairs(rng):
    """Form/lemma pairs for the edit-rule roundtrip property (>= 1000)."""
    pairs = []
    for form, lemma, _ in dictionary_entries():
        pairs.append((form, strip(lemma)))
    for lemma, stem, paradigm, gender, _ in NOUNS:
        for form, _ in noun_forms(lemma, stem, paradigm, gender):
            pairs.append((form, lemma))
            pairs.append((form[0].upper() + form[1:], lemma))
            pairs.append((form.upper(), lemma))
    for lemma, stem, _ in ADJECTIVES:
        for form, _ in adj_forms(stem):
            pairs.append((form, lemma))
    for v in VERBS:
        for negated in (False, True):
            for form, _ in verb_forms(v, negated).values():
                pairs.append((form, v[0]))
                pairs.append((form.capitalize(), v[0]))
    # corrections from the error analysis table
    pairs += [
        ("úhlům", "úhel"), ("úhlech", "úhel"), ("Angl", "Anglie"), ("Kan", "Kanada"),
        ("kateg", "kategorie"), ("zataženo", "zatáhnout"), ("el", "elektrický"),
        ("Nig", "Nigérie"), ("dožínky", "dožínky"), ("Dožínky", "dožínky"),
        ("dožínkách", "dožínky"), ("nedaleko", "daleko-1"), ("Kristem", "Kristus-3"),
        ("mg", "miligram"), ("proklel", "proklít"), ("nenesli", "nést"), ("nenesly", "nést"),
        ("Nenesla", "nést"), ("jehož", "jehož"), ("Pierce", "Pierce"), ("Piercem", "Pierce"),
        ("nindžové", "nindža"), ("nindžů", "nindža"), ("g", "gram"),
        ("prostřednictvím", "prostřednictví"), ("dešťů", "déšť"), ("studiích", "studium"),
        ("studií", "studium"), ("MW", "megawatt"), ("přímek", "přímka"), ("Maď", "Maďarsko"),
        ("kpt", "kapitán"), ("So", "sobota"), ("Út", "úterý"), ("ještě", "ještě-2"),
        ("Lincoln", "Lincoln-3"), ("jak", "jak-2"), ("lovochemie", "Lovochemie"),
        ("LOVOCHEMIE", "Lovochemie"), ("iPhone", "iPhone"), ("iphonu", "iPhone"),
        ("McDonaldu", "McDonald"), ("NATO", "NATO"), ("nato", "NATO"), ("ČR", "ČR"),
        ("USA", "USA"), ("ÚJV", "ÚJV"), ("Evropské", "Evropský"), ("OSN", "OSN"),
        ("xyz", "abc"), ("je", "být"), ("jsou", "být"), ("byl", "být"), ("šel", "jít"),
        ("lidé", "člověk"), ("lidí", "člověk"), ("dětí", "dítě"), ("dětmi", "dítě"),
        ("1.", "1"), ("2010", "2010"), ("–", "-"), ("§", "§"), ("e-mailem", "e-mail"),
        ("České", "Český"), ("ČESKÉ", "Český"), ("vDNA", "vDNA"), ("DNA", "DNA"),
    ]
    # synthetic words with mixed diacritics and sense numbers
    letters = "aábcčdďeéěfghiíjklmnňoóprřsštťuúůvyýzž"
    for k in range(400):
        n = rng.randint(2, 9)
        stem = "".join(rng.choice(letters) for _ in range(n))
        ending = rng.choice(["", "a", "u", "ů", "em", "ách", "ými", "ovi"])
        lemma = stem + rng.choice(["", "a", "o", "ý", "at", "ět"])
        if k % 7 == 0:
            lemma += "-" + str(rng.randint(1, 12))
        form = stem + ending
        if k % 5 == 0:
            form = form.capitalize()
        if k % 11 == 0:
            lemma = lemma.capitalize()
        if k % 13 == 0:
            form = form.upper()
        pairs.append((form, lemma))
    seen = set()
    out = []
    for p in pairs:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def main():
    entries = dictionary_entries()
    with open(os.path.join(HERE, "dict.tsv"), "w", encoding="utf-8", newline="\n") as out:
        # MorfFlex column order: lemma, tag, form
        for form, lemma, t in entries:
            out.write(f"{lemma}\t{t}\t{form}\n")

    rng = random.Random(20240917)
    train = [sentence(rng) for _ in range(200)]
    dev = [sentence(rng) for _ in range(100)]
    raw = [sentence(rng) for _ in range(150)]
    write_conllu(os.path.join(HERE, "train.conllu"), train, prefix="train-")
    write_conllu(os.path.join(HERE, "dev.conllu"), dev, prefix="dev-")
    write_conllu(os.path.join(HERE, "raw.conllu"), raw, gold=False, prefix="raw-")
    roundtrip_fixture(random.Random(7), 50)

    pairs = lemma_pairs(random.Random(11))
    assert len(pairs) >= 1000, len(pairs)
    with open(os.path.join(HERE, "lemma_pairs.tsv"), "w", encoding="utf-8", newline="\n") as out:
        for form, lemma in pairs:
            out.write(f"{form}\t{lemma}\n")

    with open(os.path.join(HERE, "abbreviations.txt"), "w", encoding="utf-8", newline="\n") as out:
        for a in ["Dr.", "Ing.", "Mgr.", "prof.", "např.", "tzv.", "atd.", "kpt.", "mj.", "tj."]:
            out.write(a + "\n")


if __name__ == "__main__":
    main()
