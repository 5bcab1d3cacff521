#!/usr/bin/env python3
"""Regenerates data/toy: a 200-document multilingual corpus plus the
dictionaries, stopword lists, embeddings and reference trends the pipeline
reads. Output is a pure function of SEED."""

import json
import math
import random
import sys
from pathlib import Path

SEED = 20240501
N_DOCS = 200
DIM = 24

TOPICS = {
    "Health": {
        "words": ["health", "hospital", "doctor", "patient", "clinic", "medical", "care", "nurse"],
        "trends": {
            "Public health": ["outbreak", "sanitation", "surveillance", "population", "hygiene", "epidemic"],
            "Telemedicine": ["telemedicine", "teleconsultation", "webcam", "remote", "prescription", "telehealth"],
            "new treatments": ["therapy", "drug", "trial", "antiviral", "treatment", "medicine"],
            "vaccination": ["vaccine", "vaccination", "dose", "booster", "immunization", "jab"],
            "Disease prevention": ["prevention", "mask", "screening", "distancing", "handwashing", "quarantine"],
        },
    },
    "Sports": {
        "words": ["sport", "team", "player", "coach", "match", "season", "stadium", "league"],
        "trends": {
            "Postponement": ["postponement", "postponed", "delay", "rescheduled", "calendar", "fixture"],
            "Cancellation": ["cancellation", "cancelled", "abandoned", "refund", "scrapped", "void"],
            "E-sports": ["esports", "gaming", "gamer", "tournament", "console", "twitch"],
            "Technology": ["sensor", "analytics", "wearable", "tracking", "video", "data"],
            "Fitness": ["fitness", "workout", "gym", "exercise", "jogging", "yoga"],
        },
    },
    "Politics": {
        "words": ["politics", "government", "election", "party", "vote", "minister", "parliament", "citizen"],
        "trends": {
            "Populism": ["populism", "populist", "elite", "demagogue", "rhetoric", "grievance"],
            "Nationalism": ["nationalism", "nationalist", "sovereignty", "border", "identity", "patriot"],
            "Trust": ["trust", "confidence", "credibility", "skepticism", "legitimacy", "distrust"],
            "digital democracy": ["petition", "evoting", "platform", "participation", "consultation", "crowdsourcing"],
            "Transparency": ["transparency", "accountability", "disclosure", "audit", "corruption", "openness"],
        },
    },
    "Entrepreneurship": {
        "words": ["business", "entrepreneur", "startup", "company", "market", "investor", "founder", "sales"],
        "trends": {
            "Side Hustle": ["freelancing", "sidejob", "moonlighting", "hobby", "etsy", "extra"],
            "Ecommerce": ["ecommerce", "shop", "delivery", "checkout", "marketplace", "cart"],
            "Digital skills": ["coding", "skills", "training", "bootcamp", "programming", "literacy"],
            "Innovation": ["innovation", "prototype", "patent", "invention", "research", "breakthrough"],
            "Resilience": ["resilience", "survival", "adapt", "recovery", "pivot", "rebound"],
        },
    },
    "Others": {
        "words": ["life", "people", "society", "daily", "world", "family", "change", "future"],
        "trends": {
            "Mental Health": ["anxiety", "depression", "stress", "loneliness", "wellbeing", "counseling"],
            "Contactless payment": ["contactless", "payment", "card", "wallet", "cashless", "nfc"],
            "gig economy": ["gig", "courier", "rider", "driver", "flexible", "contractor"],
            "Sustainability": ["sustainability", "climate", "recycling", "green", "renewable", "carbon"],
            "Education": ["education", "school", "student", "teacher", "classroom", "elearning"],
        },
    },
}

GENERAL = ["new", "year", "time", "city", "country", "week", "story", "news", "local", "big"]

STOP_EN = ["the", "a", "an", "of", "and", "in", "is", "are", "to", "for", "with", "on", "this", "that",
           "it", "was", "be", "by", "as", "at", "from", "has", "have", "its", "our", "their", "more", "very"]
STOP_FR = ["le", "la", "les", "de", "des", "du", "et", "en", "un", "une", "est", "sont", "pour", "avec",
           "dans", "sur", "ce", "cette", "au", "aux", "par", "plus", "nous", "leur"]
STOP_AR = ["fi", "min", "ala", "wa", "ila", "hatha", "hathihi", "alati", "kan", "ma", "la", "an", "ila"]

# French surface form -> English. Keys are turned into the preprocessed
# form below, so the dictionary matches what the tokenizer produces.
FRENCH = {
    "santé": "health", "hôpital": "hospital", "médecin": "doctor", "patient": "patient", "soins": "care",
    "clinique": "clinic", "infirmière": "nurse", "vaccin": "vaccine", "dose": "dose", "masque": "mask",
    "équipe": "team", "joueur": "player", "entraîneur": "coach", "match": "match", "saison": "season",
    "stade": "stadium", "ligue": "league", "gouvernement": "government", "élection": "election",
    "parti": "party", "vote": "vote", "ministre": "minister", "parlement": "parliament", "citoyen": "citizen",
    "confiance": "trust", "frontière": "border", "identité": "identity", "corruption": "corruption",
    "entreprise": "company", "marché": "market", "investisseur": "investor", "fondateur": "founder",
    "ventes": "sales", "livraison": "delivery", "boutique": "shop", "formation": "training",
    "recherche": "research", "brevet": "patent", "climat": "climate", "école": "school",
    "étudiant": "student", "enseignant": "teacher", "paiement": "payment", "carte": "card",
    "famille": "family", "société": "society", "monde": "world", "avenir": "future", "vie": "life",
    "stress": "stress", "livreur": "courier", "recyclage": "recycling", "nouveau": "new",
    "ville": "city", "pays": "country", "semaine": "week",
}
# Handled by the mock MT service rather than the dictionary.
FRENCH_MT = {
    "télémédecine": "telemedicine", "dépistage": "screening", "annulation": "cancellation",
    "durabilité": "sustainability", "transparence": "transparency", "populisme": "populism",
    "nationalisme": "nationalism", "résilience": "resilience", "anxiété": "anxiety",
    "report": "postponement", "tournoi": "tournament", "pétition": "petition",
}

# Arabizi surface form (with digits) -> English.
ARABIZI = {
    "sa7a": "health", "mosta4fa": "hospital", "tbib": "doctor", "marid": "patient", "la9a7": "vaccine",
    "fari9": "team", "la3ib": "player", "mobara": "match", "mal3ab": "stadium", "7okoma": "government",
    "intikhabat": "election", "7izb": "party", "wazir": "minister", "thi9a": "trust", "7odod": "border",
    "sharika": "company", "souk": "market", "mostathmir": "investor", "ta3lim": "education",
    "madrasa": "school", "talib": "student", "osra": "family", "mojtama3": "society", "3alam": "world",
    "mosta9bal": "future", "5adamat": "delivery", "ta9a": "energy", "bi2a": "climate", "daf3": "payment",
}
ARABIZI_MT = {
    "fasad": "corruption", "7ajr": "quarantine", "riyada": "sport", "tijara": "ecommerce",
    "9ala9": "anxiety", "ibtikar": "innovation",
}

LEMMAS = {"better": "good", "children": "child", "women": "woman", "men": "man", "mice": "mouse"}

ARABIZI_MAP = {"7": "h", "3": "a", "9": "q", "5": "kh", "2": "a", "8": "gh"}

RULES = [("ing", "", 3, True), ("ed", "", 3, True), ("ies", "y", 2, False), ("ss", "ss", 1, False),
         ("us", "us", 1, False), ("is", "is", 1, False), ("s", "", 2, False)]


def stem(w):
    best = None
    for suf, rep, mn, und in RULES:
        if len(w) >= len(suf) and len(w) - len(suf) >= max(mn, 1) and w.endswith(suf):
            if best is None or len(suf) > len(best[0]):
                best = (suf, rep, mn, und)
    if best is None:
        return w
    out = w[: len(w) - len(best[0])]
    if best[3] and len(out) >= 3:
        last = out[-1]
        if last == out[-2] and last.isascii() and last.isalpha() and last not in "aeiouylsz":
            out = out[:-1]
    return out + best[1]


def normalize(w):
    for _ in range(8):
        n = stem(LEMMAS.get(w, w))
        if n == w:
            break
        w = n
    return w


def arabizi_form(w):
    out = "".join(ARABIZI_MAP.get(ch, ch) for ch in w)
    return "".join(ch for ch in out if not ch.isdigit())


def unit(v):
    n = math.sqrt(sum(x * x for x in v)) or 1.0
    return [x / n for x in v]


def rand_vec(rng):
    return unit([rng.gauss(0, 1) for _ in range(DIM)])


def char_ngrams(word, lo=3, hi=6):
    w = "<" + word + ">"
    out = []
    for i in range(len(w)):
        for n in range(lo, hi + 1):
            if i + n <= len(w):
                out.append(w[i : i + n])
    return out


def sentence(rng, words):
    body = []
    for w in words:
        if rng.random() < 0.45:
            body.append(rng.choice(STOP_EN))
        body.append(w)
    body[0] = body[0].capitalize()
    if rng.random() < 0.2:
        body.insert(rng.randrange(1, len(body) + 1), str(rng.choice([2020, 2021, 19, 30])))
    if len(body) > 4 and rng.random() < 0.4:
        body[2] = body[2] + ","
    return " ".join(body) + rng.choice([".", ".", ".", "!", "?"])


def main(out_dir):
    rng = random.Random(SEED)
    out = Path(out_dir)
    (out / "stopwords").mkdir(parents=True, exist_ok=True)

    topic_names = list(TOPICS)
    trend_index = [(t, tr) for t in topic_names for tr in TOPICS[t]["trends"]]

    # Slowly varying popularity so the per-window series carry structure.
    phase = {name: rng.uniform(0, 2 * math.pi) for name in topic_names}
    tphase = {key: rng.uniform(0, 2 * math.pi) for key in trend_index}

    fr_of = {}
    for fr, en in FRENCH.items():
        fr_of.setdefault(en, fr)
    for fr, en in FRENCH_MT.items():
        fr_of.setdefault(en, fr)
    az_of = {}
    for az, en in ARABIZI.items():
        az_of.setdefault(en, az)
    for az, en in ARABIZI_MT.items():
        az_of.setdefault(en, az)

    docs = []
    for j in range(N_DOCS):
        t = j / N_DOCS
        weights = [1.0 + 0.8 * math.sin(2 * math.pi * 2 * t + phase[n]) for n in topic_names]
        topic = rng.choices(topic_names, weights=weights)[0]
        trends = list(TOPICS[topic]["trends"])
        tw = [1.0 + 0.9 * math.sin(2 * math.pi * 3 * t + tphase[(topic, tr)]) for tr in trends]
        trend = rng.choices(trends, weights=tw)[0]
        kw = TOPICS[topic]["trends"][trend]
        tw_words = TOPICS[topic]["words"]

        u = rng.random()
        lang = "english" if u < 0.6 else ("french" if u < 0.85 else "arabizi")
        sentences = []
        for _ in range(rng.randint(2, 3)):
            words = []
            for _ in range(rng.randint(4, 6)):
                r = rng.random()
                if r < 0.5:
                    words.append(rng.choice(kw))
                elif r < 0.85:
                    words.append(rng.choice(tw_words))
                else:
                    words.append(rng.choice(GENERAL))
            if lang == "french":
                words = [fr_of.get(w, w) for w in words]
                s = []
                for w in words:
                    if rng.random() < 0.45:
                        s.append(rng.choice(STOP_FR))
                    s.append(w)
                s[0] = s[0].capitalize()
                sentences.append(" ".join(s) + ".")
            elif lang == "arabizi":
                words = [az_of.get(w, w) for w in words]
                s = []
                for w in words:
                    if rng.random() < 0.4:
                        s.append(rng.choice(STOP_AR))
                    s.append(w)
                sentences.append(" ".join(s) + rng.choice([".", "!", " 😊."]))
            else:
                sentences.append(sentence(rng, words))
        docs.append({"id": f"doc{j + 1:03d}", "lang": lang, "text": " ".join(sentences)})

    with open(out / "corpus.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for d in docs:
            f.write(json.dumps(d, ensure_ascii=False) + "\n")

    for name, words in (("english", STOP_EN), ("french", STOP_FR), ("arabic", STOP_AR)):
        (out / "stopwords" / f"{name}.txt").write_text("\n".join(sorted(set(words))) + "\n", encoding="utf-8")

    (out / "lemmas.tsv").write_text("".join(f"{k}\t{v}\n" for k, v in sorted(LEMMAS.items())), encoding="utf-8")

    def dict_lines(entries, key_fn):
        merged = {}
        for src, en in entries.items():
            for key in {src, key_fn(src)}:
                merged.setdefault(key, en)
        return "".join(f"{k}\t{v}\n" for k, v in sorted(merged.items()))

    (out / "dict_fr_en.tsv").write_text(dict_lines(FRENCH, normalize), encoding="utf-8")
    (out / "dict_arabizi_en.tsv").write_text(
        dict_lines(ARABIZI, lambda w: normalize(arabizi_form(w))), encoding="utf-8")
    mt = {}
    for src, en in FRENCH_MT.items():
        mt[normalize(src)] = en
    for src, en in ARABIZI_MT.items():
        mt[normalize(arabizi_form(src))] = en
    (out / "mt_terms.tsv").write_text("".join(f"{k}\t{v}\n" for k, v in sorted(mt.items())), encoding="utf-8")

    # Embeddings: topic and trend directions plus word-level noise. Stemmed
    # forms get the same vector as their surface word.
    vecs = {}
    topic_dir = {n: rand_vec(rng) for n in topic_names}
    trend_dir = {key: rand_vec(rng) for key in trend_index}

    def put(word, v):
        for w in {word, normalize(word)}:
            vecs.setdefault(w, v)

    for n in topic_names:
        for w in TOPICS[n]["words"]:
            noise = rand_vec(rng)
            put(w, unit([topic_dir[n][i] + 0.3 * noise[i] for i in range(DIM)]))
        for tr, kws in TOPICS[n]["trends"].items():
            for w in kws:
                noise = rand_vec(rng)
                put(w, unit([0.5 * topic_dir[n][i] + trend_dir[(n, tr)][i] + 0.25 * noise[i] for i in range(DIM)]))
    for w in GENERAL + ["energy", "tournament", "ecommerce", "sport"]:
        put(w, rand_vec(rng))

    with open(out / "embeddings.vec", "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(vecs)} {DIM}\n")
        for w in sorted(vecs):
            f.write(w + " " + " ".join(f"{x:.5f}" for x in vecs[w]) + "\n")

    # Sub-word vectors: each n-gram is the mean of the words containing it,
    # scaled so a word's n-gram sum has roughly unit length.
    acc = {}
    for w in sorted(vecs):
        grams = char_ngrams(w)
        for g in grams:
            s = acc.setdefault(g, [[0.0] * DIM, 0])
            for i in range(DIM):
                s[0][i] += vecs[w][i] / len(grams)
            s[1] += 1
    with open(out / "ngrams.vec", "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(acc)} {DIM}\n")
        for g in sorted(acc):
            v, c = acc[g]
            f.write(g + " " + " ".join(f"{x / c:.5f}" for x in v) + "\n")

    trends_json = {n: [{"label": tr, "keywords": kws} for tr, kws in TOPICS[n]["trends"].items()] for n in topic_names}
    (out / "trends.json").write_text(json.dumps(trends_json, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "toy")
