#!/usr/bin/env python3
"""Regenerates the synthetic fixture corpus (session transcripts and the
in-context example pool). Deterministic; run from the fixtures directory."""

import json
import random

COMPACT = dict(separators=(",", ":"), ensure_ascii=False)


def dump_line(record):
    return json.dumps(record, **COMPACT) + "\n"


def make_session_a():
    """48 utterances, 75 s apart, one hour total. Indices 32..43 fall in the
    working phase; patient turns are the odd indices."""
    therapist_lines = [
        "Thanks for coming in today.",
        "How has the week been treating you?",
        "Tell me a bit more about that.",
        "What was going through your mind at that point?",
        "That sounds like it took some effort.",
        "How did your body feel when that happened?",
        "What would you like to focus on today?",
        "Can you walk me through what happened next?",
        "What do you make of that reaction?",
        "How often does that come up for you?",
        "Where do you notice that the most?",
        "What did you end up doing?",
        "How did that land with you?",
        "What felt different this time?",
        "Who else was involved in that?",
        "What would help you feel prepared?",
        "Let's slow down on that for a moment.",
        "What does that bring up for you now?",
        "How would you like things to look instead?",
        "What got in the way there?",
        "When did you first notice this pattern?",
        "What happens right before that feeling shows up?",
        "How do you usually respond to that?",
        "What would you tell a friend in that spot?",
    ]
    patient_lines = [
        "Honestly it was a pretty ordinary week.",
        "Work kept me busy most days.",
        "We had dinner with [HUSBAND] on the weekend.",
        "The commute has been long but manageable.",
        "I watched a lot of shows in the evenings.",
        "The weather made everything feel slower.",
        "I did get out for a couple of walks.",
        "Mostly errands and chores, nothing special.",
        "I talked to my sister on the phone for a while.",
        "The new schedule is still settling in.",
        "Lunch breaks have been my quiet time.",
        "We started planning the trip for [YEAR].",
        "The neighbors were renovating all week, it was loud.",
        "I finally fixed the bike tire.",
        "Groceries, laundry, the usual loop.",
        "I tried the breathing exercise twice.",
    ]
    working_phase_patient = {
        33: "Yeah, possibly not playing out how I wanted it to was very frustrating.",
        35: "I really want to multitask.",
        37: "Like, I just moved here.",
        39: "I keep telling myself I'm going to fail the exam no matter what.",
        41: "I've been skipping meals and barely sleeping lately.",
        43: "My family expects me to take over the store, and I feel responsible for them.",
    }
    working_phase_therapist = {
        32: "Let's look at what happened with the project.",
        34: "What do you want to be doing differently?",
        36: "How has the move been affecting you?",
        38: "Where does that thought usually take you?",
        40: "How has your routine been holding up?",
        42: "What role does your family play in that decision?",
    }
    closing_therapist = {
        44: "Let's start wrapping up for today.",
        46: "We can pick this up again next week.",
    }
    closing_patient = {
        45: "That gives me something to think about.",
        47: "Thanks, this helped me sort a few things out.",
    }

    lines = []
    ti = pi = 0
    for i in range(48):
        speaker = "therapist" if i % 2 == 0 else "patient"
        if i in working_phase_patient:
            text = working_phase_patient[i]
        elif i in working_phase_therapist:
            text = working_phase_therapist[i]
        elif i in closing_therapist:
            text = closing_therapist[i]
        elif i in closing_patient:
            text = closing_patient[i]
        elif speaker == "therapist":
            text = therapist_lines[ti % len(therapist_lines)]
            ti += 1
        else:
            text = patient_lines[pi % len(patient_lines)]
            pi += 1
        start = 75.0 * i
        lines.append(
            dump_line(
                {
                    "session_id": "p01_s05",
                    "index": i,
                    "speaker": speaker,
                    "text": text,
                    "start_s": start,
                    "end_s": start + 70.0,
                }
            )
        )
    with open("session_a.jsonl", "w") as f:
        f.writelines(lines)


def make_session_pii():
    """Six utterances with exactly two seeded PII spans (a phone number and
    an email); everything else uses placeholder tokens."""
    rows = [
        ("therapist", "How did the call with your brother go?"),
        ("patient", "I told [BROTHER] he can call me at 555-0142 whenever."),
        ("therapist", "And did he reach out afterwards?"),
        ("patient", "He sent the forms to me at sample.person@example.com instead."),
        ("therapist", "How did that feel?"),
        ("patient", "Honestly, [BROTHER] trying at all felt like progress."),
    ]
    with open("session_pii.jsonl", "w") as f:
        for i, (speaker, text) in enumerate(rows):
            start = 10.0 * i
            f.write(
                dump_line(
                    {
                        "session_id": "p02_s01",
                        "index": i,
                        "speaker": speaker,
                        "text": text,
                        "start_s": start,
                        "end_s": start + 8.0,
                    }
                )
            )


POSITIVE_TEMPLATES = [
    ("I keep blaming myself whenever plans change at the last minute.", ["Cognition"]),
    ("I felt a wave of dread before the meeting even started.", ["Affect"]),
    ("I notice I tune out completely when the topic turns to money.", ["Attention"]),
    ("I want to get back to painting because it used to ground me.", ["Motivation"]),
    ("I see myself as the one who always has to hold things together.", ["Sense of Self"]),
    ("I have been pacing around the kitchen instead of sitting with it.", ["Overt Behavior"]),
    ("Living an hour from everyone makes weekends complicated.", ["Context/Moderators"]),
    ("My coworkers expect me to smooth over every conflict.", ["Sociocultural"]),
    ("My sleep has been broken into two or three stretches a night.", ["Biophysiological"]),
    ("I told myself the rejection proved I should stop trying.", ["Cognition", "Motivation"]),
    ("I snapped at my roommate and then felt guilty for hours.", ["Overt Behavior", "Affect"]),
    ("I feel like a fraud when people compliment my work.", ["Sense of Self", "Affect"]),
]

NEGATIVE_TEMPLATES = [
    "The bus was about ten minutes late this morning.",
    "We repainted the hallway over the weekend.",
    "My cousin is visiting sometime next month.",
    "The store was out of the brand I usually buy.",
    "It rained most of the afternoon yesterday.",
    "The meeting got moved to the smaller room.",
    "I had leftovers for lunch again.",
    "The printer jammed twice before it worked.",
    "Their new place has a view of the park.",
    "The show we started has nine episodes.",
]

CONTEXTS = [
    "therapist: What stood out this week? | therapist: Take your time.",
    "therapist: How did that go? | patient: It went differently than planned.",
    "patient: There was a lot going on. | therapist: Which part mattered most?",
    "therapist: Mm-hmm. | therapist: Say more about that.",
]


def make_gold_pool():
    rng = random.Random(20240131)
    rows = []
    for i in range(100):
        text, dims = POSITIVE_TEMPLATES[i % len(POSITIVE_TEMPLATES)]
        rows.append(
            {
                "text": f"{text} (pool case {i + 1})",
                "context": CONTEXTS[i % len(CONTEXTS)],
                "is_process": True,
                "dimensions": dims,
                "rater_id": "r1" if i % 2 == 0 else "r2",
            }
        )
    for i in range(100):
        text = NEGATIVE_TEMPLATES[i % len(NEGATIVE_TEMPLATES)]
        rows.append(
            {
                "text": f"{text} (pool case {i + 101})",
                "context": CONTEXTS[(i + 1) % len(CONTEXTS)],
                "is_process": False,
                "dimensions": [],
                "rater_id": "r1" if i % 2 == 0 else "r2",
            }
        )
    rng.shuffle(rows)
    with open("gold_pool.jsonl", "w") as f:
        for row in rows:
            f.write(dump_line(row))


if __name__ == "__main__":
    make_session_a()
    make_session_pii()
    make_gold_pool()
    print("fixtures written")
