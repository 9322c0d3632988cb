"""Writes the keyword-planted training sets used by the fixture models."""
import csv
import random

LABELS = ["optimistic", "thankful", "empathetic", "pessimistic", "anxious",
          "sad", "annoyed", "denial", "official_report", "joking"]
KEYWORDS = {
    "optimistic": ["hope", "better", "tomorrow", "believe", "bright"],
    "thankful": ["thank", "thanks", "grateful", "appreciate", "kindly"],
    "empathetic": ["sorry", "understand", "feel", "care", "comfort"],
    "pessimistic": ["never", "hopeless", "worse", "doomed", "pointless"],
    "anxious": ["afraid", "scared", "worried", "nervous", "panic"],
    "sad": ["cry", "miss", "lost", "alone", "grief"],
    "annoyed": ["shut", "stupid", "damn", "hell", "sick"],
    "denial": ["lie", "fake", "nonsense", "hoax", "lying"],
    "official_report": ["police", "report", "officer", "statement", "office"],
    "joking": ["funny", "joke", "laugh", "kidding", "joking"],
}
FILLER = ("the a you we it this that here there now then today city house car road night "
          "day man woman people thing time place money work family home friend door "
          "street table phone letter week year morning").split()
ABUSIVE = ["idiot", "moron", "bastard", "scum", "loser", "jerk", "stupid", "trash"]


def sentiment_rows(rng, n):
    for _ in range(n):
        k = rng.choice([1, 1, 2, 2, 3])
        labels = set(rng.sample(LABELS, k))
        words = [rng.choice(FILLER) for _ in range(rng.randint(4, 8))]
        for label in labels:
            words += rng.sample(KEYWORDS[label], rng.randint(1, 2))
        rng.shuffle(words)
        yield [" ".join(words)] + [1 if label in labels else 0 for label in LABELS]


def abuse_rows(rng, n):
    for _ in range(n):
        abusive = rng.random() < 0.4
        words = [rng.choice(FILLER) for _ in range(rng.randint(4, 9))]
        if abusive:
            words += rng.sample(ABUSIVE, rng.randint(1, 2))
        rng.shuffle(words)
        yield [" ".join(words), 1 if abusive else 0]


def main():
    rng = random.Random(42)
    with open("sentiment.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["text"] + LABELS)
        w.writerows(sentiment_rows(rng, 600))
    with open("abuse.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["text", "label"])
        w.writerows(abuse_rows(rng, 400))


if __name__ == "__main__":
    main()
