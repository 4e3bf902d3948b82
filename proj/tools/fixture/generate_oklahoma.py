#!/usr/bin/env python3
"""Regenerates the Oklahoma county fixture under data/oklahoma/.

Populations are rounded 2019 county estimates; the age split, bed counts and
centroids are approximations good enough for desk-scale scenario work, not
authoritative figures.
"""
import csv
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parents[2] / "data" / "oklahoma"

# fips suffix, name, population, seat latitude, seat longitude
COUNTIES = [
    (1, "Adair", 22194, 35.88, -94.66), (3, "Alfalfa", 5702, 36.73, -98.32),
    (5, "Atoka", 13758, 34.37, -96.04), (7, "Beaver", 5311, 36.75, -100.48),
    (9, "Beckham", 21859, 35.27, -99.68), (11, "Blaine", 9429, 35.88, -98.43),
    (13, "Bryan", 47995, 33.96, -96.26), (15, "Caddo", 28762, 35.17, -98.38),
    (17, "Canadian", 148306, 35.54, -97.98), (19, "Carter", 48111, 34.25, -97.29),
    (21, "Cherokee", 48657, 35.91, -94.99), (23, "Choctaw", 14672, 34.02, -95.55),
    (25, "Cimarron", 2137, 36.75, -102.52), (27, "Cleveland", 284014, 35.20, -97.33),
    (29, "Coal", 5495, 34.59, -96.29), (31, "Comanche", 120749, 34.66, -98.48),
    (33, "Cotton", 5666, 34.29, -98.37), (35, "Craig", 14142, 36.80, -95.21),
    (37, "Creek", 71522, 35.90, -96.37), (39, "Custer", 29003, 35.64, -98.99),
    (41, "Delaware", 43009, 36.41, -94.80), (43, "Dewey", 4891, 35.97, -99.00),
    (45, "Ellis", 3859, 36.22, -99.75), (47, "Garfield", 61056, 36.38, -97.78),
    (49, "Garvin", 27711, 34.70, -97.31), (51, "Grady", 55834, 35.02, -97.88),
    (53, "Grant", 4333, 36.80, -97.79), (55, "Greer", 5712, 34.94, -99.56),
    (57, "Harmon", 2653, 34.74, -99.85), (59, "Harper", 3688, 36.79, -99.67),
    (61, "Haskell", 12627, 35.22, -95.12), (63, "Hughes", 13279, 35.05, -96.25),
    (65, "Jackson", 24530, 34.59, -99.41), (67, "Jefferson", 6002, 34.11, -97.84),
    (69, "Johnston", 11085, 34.32, -96.66), (71, "Kay", 43538, 36.82, -97.14),
    (73, "Kingfisher", 15765, 35.94, -97.94), (75, "Kiowa", 8708, 34.92, -98.98),
    (77, "Latimer", 10073, 34.92, -95.25), (79, "Le Flore", 49853, 34.90, -94.70),
    (81, "Lincoln", 34877, 35.70, -96.88), (83, "Logan", 48011, 35.92, -97.44),
    (85, "Love", 10253, 33.95, -97.24), (87, "McClain", 40474, 35.01, -97.45),
    (89, "McCurtain", 32832, 34.12, -94.77), (91, "McIntosh", 19596, 35.37, -95.58),
    (93, "Major", 7629, 36.31, -98.54), (95, "Marshall", 16931, 34.03, -96.77),
    (97, "Mayes", 41100, 36.25, -95.23), (99, "Murray", 14073, 34.48, -97.07),
    (101, "Muskogee", 67997, 35.62, -95.38), (103, "Noble", 11131, 36.39, -97.23),
    (105, "Nowata", 10076, 36.80, -95.62), (107, "Okfuskee", 11993, 35.46, -96.32),
    (109, "Oklahoma", 797434, 35.55, -97.41), (111, "Okmulgee", 38465, 35.65, -95.96),
    (113, "Osage", 46963, 36.63, -96.40), (115, "Ottawa", 31127, 36.84, -94.81),
    (117, "Pawnee", 16376, 36.31, -96.70), (119, "Payne", 81784, 36.08, -96.98),
    (121, "Pittsburg", 43654, 34.92, -95.75), (123, "Pontotoc", 38284, 34.73, -96.68),
    (125, "Pottawatomie", 72592, 35.21, -96.95), (127, "Pushmataha", 11096, 34.41, -95.38),
    (129, "Roger Mills", 3583, 35.69, -99.56), (131, "Rogers", 92459, 36.37, -95.60),
    (133, "Seminole", 24258, 35.17, -96.62), (135, "Sequoyah", 41569, 35.50, -94.75),
    (137, "Stephens", 43143, 34.48, -97.89), (139, "Texas", 19983, 36.75, -101.49),
    (141, "Tillman", 7250, 34.37, -98.92), (143, "Tulsa", 651552, 36.12, -95.94),
    (145, "Wagoner", 81289, 35.96, -95.52), (147, "Washington", 51527, 36.72, -95.90),
    (149, "Washita", 10916, 35.29, -98.97), (151, "Woods", 8793, 36.77, -98.86),
    (153, "Woodward", 20211, 36.42, -99.27),
]

URBAN = {"Oklahoma", "Tulsa", "Cleveland", "Canadian", "Comanche"}
AIRPORTS = {"Oklahoma", "Tulsa", "Comanche", "Payne"}
# staffed beds for the metro counties; everything else uses a per-capita rate
BEDS = {"Oklahoma": 3900, "Tulsa": 3000, "Cleveland": 560, "Comanche": 480, "Canadian": 160}

AGE_SPLIT = {"urban": (0.24, 0.62), "small": (0.24, 0.59), "rural": (0.23, 0.57)}

NEIGHBORS = {
    "Cimarron": ["Texas"],
    "Texas": ["Beaver"],
    "Beaver": ["Harper", "Ellis"],
    "Harper": ["Ellis", "Woodward", "Woods"],
    "Woods": ["Woodward", "Major", "Alfalfa"],
    "Alfalfa": ["Major", "Garfield", "Grant"],
    "Grant": ["Garfield", "Kay", "Noble"],
    "Kay": ["Noble", "Osage"],
    "Osage": ["Noble", "Pawnee", "Tulsa", "Washington"],
    "Washington": ["Nowata", "Rogers", "Tulsa"],
    "Nowata": ["Craig", "Rogers"],
    "Craig": ["Ottawa", "Delaware", "Mayes", "Rogers"],
    "Ottawa": ["Delaware"],
    "Delaware": ["Mayes", "Cherokee", "Adair"],
    "Mayes": ["Cherokee", "Wagoner", "Rogers"],
    "Rogers": ["Wagoner", "Tulsa"],
    "Tulsa": ["Wagoner", "Okmulgee", "Creek", "Pawnee"],
    "Wagoner": ["Cherokee", "Muskogee", "Okmulgee"],
    "Cherokee": ["Adair", "Sequoyah", "Muskogee"],
    "Adair": ["Sequoyah"],
    "Sequoyah": ["Muskogee", "Haskell", "Le Flore"],
    "Muskogee": ["Haskell", "McIntosh", "Okmulgee"],
    "Okmulgee": ["McIntosh", "Okfuskee", "Creek"],
    "Creek": ["Pawnee", "Okfuskee", "Lincoln", "Payne"],
    "Pawnee": ["Noble", "Payne"],
    "Noble": ["Payne", "Logan", "Garfield"],
    "Garfield": ["Logan", "Kingfisher", "Major"],
    "Major": ["Kingfisher", "Blaine", "Dewey", "Woodward"],
    "Woodward": ["Dewey", "Ellis"],
    "Ellis": ["Dewey", "Roger Mills"],
    "Dewey": ["Blaine", "Custer", "Roger Mills"],
    "Blaine": ["Kingfisher", "Canadian", "Caddo", "Custer"],
    "Kingfisher": ["Logan", "Canadian"],
    "Logan": ["Payne", "Lincoln", "Oklahoma"],
    "Payne": ["Lincoln"],
    "Lincoln": ["Okfuskee", "Pottawatomie", "Oklahoma"],
    "Okfuskee": ["McIntosh", "Hughes", "Seminole"],
    "McIntosh": ["Haskell", "Pittsburg", "Hughes"],
    "Haskell": ["Le Flore", "Latimer", "Pittsburg"],
    "Le Flore": ["Latimer", "Pushmataha", "McCurtain"],
    "Latimer": ["Pushmataha", "Pittsburg"],
    "Pittsburg": ["Pushmataha", "Atoka", "Coal", "Hughes"],
    "Hughes": ["Coal", "Pontotoc", "Seminole"],
    "Seminole": ["Pontotoc", "Pottawatomie"],
    "Pottawatomie": ["Pontotoc", "McClain", "Cleveland", "Oklahoma"],
    "Oklahoma": ["Cleveland", "Canadian"],
    "Cleveland": ["McClain"],
    "Canadian": ["Grady", "Caddo"],
    "McClain": ["Garvin", "Grady"],
    "Grady": ["Garvin", "Stephens", "Comanche", "Caddo"],
    "Caddo": ["Comanche", "Kiowa", "Washita", "Custer"],
    "Custer": ["Washita", "Roger Mills"],
    "Roger Mills": ["Washita", "Beckham"],
    "Washita": ["Kiowa", "Greer", "Beckham"],
    "Beckham": ["Greer", "Harmon"],
    "Greer": ["Kiowa", "Jackson", "Harmon"],
    "Harmon": ["Jackson"],
    "Jackson": ["Kiowa", "Tillman"],
    "Kiowa": ["Comanche", "Tillman"],
    "Tillman": ["Comanche", "Cotton"],
    "Comanche": ["Stephens", "Cotton"],
    "Cotton": ["Stephens", "Jefferson"],
    "Stephens": ["Garvin", "Carter", "Jefferson"],
    "Jefferson": ["Carter", "Love"],
    "Garvin": ["Pontotoc", "Murray", "Carter"],
    "Pontotoc": ["Coal", "Johnston", "Murray"],
    "Murray": ["Johnston", "Carter"],
    "Carter": ["Johnston", "Marshall", "Love"],
    "Love": ["Marshall"],
    "Marshall": ["Johnston", "Bryan"],
    "Johnston": ["Coal", "Atoka", "Bryan"],
    "Coal": ["Atoka"],
    "Atoka": ["Pushmataha", "Choctaw", "Bryan"],
    "Bryan": ["Choctaw"],
    "Choctaw": ["Pushmataha", "McCurtain"],
    "Pushmataha": ["McCurtain"],
}


def density_class(name, pop):
    if name in URBAN:
        return "urban"
    return "small" if pop >= 40000 else "rural"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    fips_of = {}
    rows = []
    for suffix, name, pop, lat, lon in COUNTIES:
        fips = f"40{suffix:03d}"
        fips_of[name] = fips
        cls = density_class(name, pop)
        young, adult = AGE_SPLIT[cls]
        p0 = round(pop * young)
        p1 = round(pop * adult)
        p2 = pop - p0 - p1
        beds = BEDS.get(name, round(pop * (2.0 if cls == "small" else 1.2) / 1000))
        rows.append([fips, f"{name} County", p0, p1, p2, cls, beds, f"{lat:.2f}", f"{lon:.2f}",
                     1 if name in AIRPORTS else 0])

    with open(OUT / "counties.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["fips", "name", "pop_0_17", "pop_18_64", "pop_65plus", "density_class",
                    "total_beds", "lat", "lon", "has_airport"])
        w.writerows(rows)

    edges = sorted({tuple(sorted((fips_of[a], fips_of[b])))
                    for a, bs in NEIGHBORS.items() for b in bs})
    with open(OUT / "adjacency.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["fips_a", "fips_b"])
        w.writerows(edges)

    features = [{
        "type": "Feature",
        "properties": {"fips": r[0], "name": r[1]},
        "geometry": {"type": "Point", "coordinates": [float(r[8]), float(r[7])]},
    } for r in rows]
    with open(OUT / "geometry.geojson", "w") as f:
        json.dump({"type": "FeatureCollection", "features": features}, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
