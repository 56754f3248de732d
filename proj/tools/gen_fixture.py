#!/usr/bin/env python3
"""Generate the synthetic fixture corpus (data/fixtures/corpus.jsonl).

63 transcripts: 29 parent/parent-or-sibling and 9 parent/child dyads
(IDD_FAMILY cohort), 25 friend dyads (PEER cohort). Deterministic; rerun
only when the fixture should change, then refresh the golden files.
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "fixtures" / "corpus.jsonl"

THEMES = {
    "family": ["family", "mother", "brother", "sister", "parents", "home",
               "together", "dinner", "visit"],
    "work": ["work", "job", "boss", "shift", "hours", "workplace", "coworkers",
             "paycheck", "training"],
    "money": ["money", "budget", "save", "saving", "spend", "bank", "bills",
              "buying", "cost"],
    "housing": ["house", "apartment", "bus", "commute", "moving", "rent",
                "room", "neighborhood", "downtown"],
    "school": ["school", "class", "teacher", "homework", "program", "college",
               "courses", "studying", "graduation"],
    "independence": ["independent", "cooking", "chores", "support", "schedule",
                     "routine", "skills", "appointments", "doctor"],
    "driving": ["driving", "car", "license", "road", "practice", "parking",
                "traffic", "lessons"],
    "interview": ["interview", "resume", "apply", "application", "hiring",
                  "questions", "offer"],
    "social": ["friends", "party", "movie", "hang", "weekend", "games",
               "concert", "plans"],
    "communication": ["help", "feel", "listen", "understand", "share",
                      "advice", "honest"],
}

IDD_THEMES = ["family", "work", "money", "housing", "school", "independence"]
PEER_THEMES = ["school", "work", "money", "family", "driving", "interview",
               "social", "communication"]

GLUE = ["we", "i", "you", "the", "a", "so", "and", "then", "well", "it",
        "is", "was", "for", "to", "that", "of", "about", "with", "think",
        "know", "really", "just", "maybe", "she", "he", "they"]

POSITIVE = ["happy", "great", "fun", "nice", "hope", "good", "glad", "love",
            "excited", "proud", "safe", "better"]
NEGATIVE = ["worry", "worried", "hard", "bad", "scared", "stress", "nervous",
            "sad", "tired", "difficult", "upset", "afraid"]

# emotion word -> matching researcher code (subset of the default label map)
EMOTION_LABELS = {
    "happy": "expresses joy",
    "love": "express love",
    "fun": "expresses like",
    "glad": "expresses gratitude",
    "excited": "expresses excitement",
    "hope": "expresses hope",
    "worry": "expresses worry",
    "worried": "expresses worry",
    "scared": "expresses fear",
    "afraid": "expresses fear",
    "nervous": "expresses anxiety",
    "sad": "expresses sadness",
    "upset": "expresses disappointment",
    "angry": "expresses anger",
    "mad": "expresses frustration",
    "gross": "expresses disgust",
    "surprised": "expresses surprise",
    "wow": "expresses surprise",
    "trust": "expresses trust",
    "believe": "expresses confidence",
    "safe": "expresses trust",
}

EXTRA_EMOTION_WORDS = ["angry", "mad", "gross", "surprised", "wow", "trust",
                       "believe", "plan", "future", "waiting", "amazing",
                       "lonely", "doctor", "therapist", "government", "money",
                       "aaaah", "ugh", "yay", "promise", "kind"]


def make_utterance(rng, theme_words, mood):
    words = []
    n = rng.randint(4, 10)
    for _ in range(n):
        roll = rng.random()
        if roll < 0.42:
            words.append(rng.choice(theme_words))
        else:
            words.append(rng.choice(GLUE))
    labels = []
    roll = rng.random()
    if roll < mood:
        words.append(rng.choice(POSITIVE))
    elif roll < mood + 0.22:
        words.append(rng.choice(NEGATIVE))
    if rng.random() < 0.18:
        words.append(rng.choice(EXTRA_EMOTION_WORDS))
    rng.shuffle(words)

    for w in words:
        if w in EMOTION_LABELS and rng.random() < 0.7:
            labels.append(EMOTION_LABELS[w])
    if rng.random() < 0.02:
        labels.append("expresses concern")
    if rng.random() < 0.02:
        labels.append("non-verbal gesture")  # deliberately unmapped

    text = " ".join(words)
    text = text[0].upper() + text[1:] + rng.choice([".", ".", ".", "!", "?"])
    return text, sorted(set(labels))


def make_transcript(rng, tid, cohort, dyad_kind, time_point, speakers, themes):
    theme_a, theme_b = rng.sample(themes, 2)
    theme_words = THEMES[theme_a] + THEMES[theme_b]
    n_lines = rng.randint(32, 58)
    mood_start = rng.uniform(0.08, 0.4)
    mood_end = rng.uniform(0.08, 0.4)
    rows = []
    for i in range(n_lines):
        mood = mood_start + (mood_end - mood_start) * i / max(n_lines - 1, 1)
        text, labels = make_utterance(rng, theme_words, mood)
        row = {
            "transcript_id": tid,
            "line_index": i,
            "speaker": speakers[i % 2],
            "text": text,
            "cohort": cohort,
            "time_point": time_point,
            "dyad_kind": dyad_kind,
        }
        if labels:
            row["labels"] = labels
        rows.append(row)
    # a coded nonverbal event: empty text is legal when labels are present
    if rng.random() < 0.2:
        rows[-1]["text"] = ""
        rows[-1]["labels"] = ["expresses joy"]
    return rows


def main():
    rng = random.Random(20240607)
    rows = []
    for i in range(29):
        speakers = ("PARENT1", "SIBLING" if i % 3 == 0 else "PARENT2")
        rows += make_transcript(rng, f"fam{i+1:02d}", "IDD_FAMILY",
                                "PARENT_PARENT_OR_SIBLING",
                                "T1" if rng.random() < 0.6 else "T2",
                                speakers, IDD_THEMES)
    for i in range(9):
        rows += make_transcript(rng, f"par{i+1:02d}", "IDD_FAMILY",
                                "PARENT_CHILD",
                                "T1" if rng.random() < 0.6 else "T2",
                                ("PARENT", "YOUTH"), IDD_THEMES)
    for i in range(25):
        rows += make_transcript(rng, f"peer{i+1:02d}", "PEER", "FRIENDS",
                                "T1" if rng.random() < 0.6 else "T2",
                                ("FRIEND1", "FRIEND2"), PEER_THEMES)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w") as f:
        for row in rows:
            f.write(json.dumps(row) + "\n")
    print(f"wrote {len(rows)} utterances to {OUT}")


if __name__ == "__main__":
    main()
