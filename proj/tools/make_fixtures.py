#!/usr/bin/env python3
"""Regenerates the screenplay fixtures under data/screenplays/.

Each fixture is a plain-text screenplay plus a .gold sidecar of
"scene_index<TAB>cluster_id" lines. Output is deterministic.
"""
import random
import sys
from pathlib import Path

ACTION = [
    "A long pause. Nobody moves.",
    "Rain streaks the windows.",
    "She checks her watch, then the door.",
    "The lights flicker and steady.",
    "He sets the bag down carefully.",
    "Footsteps somewhere above them.",
]

DIALOGUE = [
    ("MARA", "We should not be here."),
    ("OWEN", "Give it a minute."),
    ("MARA", "You said that an hour ago."),
    ("OWEN", "And I was right then too."),
]


def scene_body(rng):
    lines = ["", rng.choice(ACTION), ""]
    speaker, line = rng.choice(DIALOGUE)
    lines += ["          " + speaker, "     " + line, ""]
    return lines


def write(out_dir, name, headings, gold, seed):
    rng = random.Random(seed)
    text = ["FADE IN:", ""]
    for h in headings:
        text.append(h)
        text += scene_body(rng)
    text += ["FADE OUT.", ""]
    (out_dir / f"{name}.txt").write_text("\n".join(text))
    sidecar = [f"# scene_index\tcluster_id ({len(gold)} scenes)"]
    sidecar += [f"{i}\t{c}" for i, c in enumerate(gold)]
    (out_dir / f"{name}.gold").write_text("\n".join(sidecar) + "\n")


def two_locations(out_dir):
    kitchen = ["INT. KITCHEN - DAY", "INT. KITCHEN - NIGHT", "INT. KITCHEN - MORNING",
               "INT. KITCHEN - LATER", "INT. KITCHEN - CONTINUOUS", "INT. KITCHEN - EVENING",
               "INT. KITCHEN - DAY", "INT. KITCHEN - NIGHT"]
    harbor = ["EXT. HARBOR DOCKS - NIGHT", "EXT. HARBOR DOCKS - DAWN", "EXT. HARBOR DOCKS - DAY",
              "EXT. HARBOR DOCKS - DUSK", "EXT. HARBOR DOCKS - LATER", "EXT. HARBOR DOCKS - NIGHT",
              "EXT. HARBOR DOCKS - AFTERNOON", "EXT. HARBOR DOCKS - DAY"]
    headings, gold = [], []
    for k, h in zip(kitchen, harbor):
        headings += [k, h]
        gold += [0, 1]
    write(out_dir, "two_locations", headings, gold, seed=2)


def identical_headings(out_dir):
    headings = ["INT. LIGHTHOUSE STAIRWELL - NIGHT"] * 10
    write(out_dir, "identical_headings", headings, [0] * 10, seed=1)


def long_script(out_dir):
    locations = [
        ("INT.", "REBEL BLOCKADE RUNNER MAIN HALLWAY"),
        ("INT.", "REBEL BLOCKADE RUNNER COCKPIT"),
        ("EXT.", "DESERT WASTELAND"),
        ("INT.", "SANDCRAWLER HOLD AREA"),
        ("EXT.", "LARS HOMESTEAD"),
        ("INT.", "LARS HOMESTEAD GARAGE AREA"),
        ("INT.", "DEATH STAR CONFERENCE ROOM"),
        ("INT.", "DEATH STAR DETENTION AREA"),
        ("EXT.", "MOS EISLEY SPACEPORT STREET"),
        ("INT.", "MOS EISLEY CANTINA"),
        ("INT.", "MILLENNIUM FALCON COCKPIT"),
        ("INT.", "MILLENNIUM FALCON HOLD AREA"),
        ("EXT.", "SPACE AROUND YAVIN"),
        ("INT.", "MASSASSI OUTPOST WAR ROOM"),
        ("I/E", "X-WING COCKPIT"),
    ]
    tags = ["DAY", "NIGHT", "LATER", "CONTINUOUS", "MORNING", "DAWN"]
    rng = random.Random(137)
    order = list(range(len(locations))) * 10
    rng.shuffle(order)
    order = order[:137]
    headings = []
    for i, loc in enumerate(order):
        marker, place = locations[loc]
        tag = rng.choice(tags)
        if i % 7 == 3:
            headings.append(f"{i + 1} {marker} {place} - {tag} {i + 1}")
        elif i % 11 == 5:
            headings.append(f"{marker.lower()} {place.lower()} - {tag.lower()}")
        else:
            headings.append(f"{marker} {place} - {tag}")
    write(out_dir, "long_script", headings, order, seed=3)


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "screenplays"
    out_dir.mkdir(parents=True, exist_ok=True)
    two_locations(out_dir)
    identical_headings(out_dir)
    long_script(out_dir)


if __name__ == "__main__":
    main()
