#!/usr/bin/env python3
"""Regenerate the fixture catalog under fixtures/catalog/.

The corpus is sized so that a free-text Resource search for 'planet'
matches exactly seven entries, one of them (the OSIRIS WAC dataset) only
through its Targets field rather than its descriptions.
"""

from __future__ import annotations

import sys
from pathlib import Path

from planetsearch.model import (
    EntryId,
    GenericEntry,
    KeywordEntry,
    PersonDescriptor,
    ResourceDescriptor,
    Section,
    all_texts,
    validate_catalog,
)
from planetsearch.store import Catalog, store_catalog

ROOT = Path(__file__).resolve().parent.parent


def rid(value: str) -> EntryId:
    return EntryId("Resource", value)


def ref(collection: str, value: str) -> EntryId:
    return EntryId(collection, value)


def generic(collection: str, value: str, *fields: tuple[str, str]) -> GenericEntry:
    return GenericEntry(EntryId(collection, value), tuple(fields))


RESOURCES = [
    ResourceDescriptor(
        id=rid("R1"),
        name="Data from the OSIRIS WAC instrument",
        short_description="Data from the OSIRIS WAC instrument onboard of the ESA "
                          "ROSETTA mission",
        url="http://ciss.unipd.it/wac/wac.html",
        long_description="The Italian participation to OSIRIS (Optical Spectroscopic "
                         "InfraRed Imaging System) is relevant to the WAC (Wide Angle "
                         "Camera) and the mechanism of WAC and NAC (Narrow Angle Camera).",
        sections=(
            Section("General Info", (
                ("Resource type", "Dataset/Data file"),
                ("Related domain", "Space based instruments / observations"),
                ("Language", "English"),
            )),
            Section("Resource Info", (
                ("Mission(s)", "Rosetta"),
                ("Targets", "Planets and comets"),
                ("Node(s)", "Small Bodies and Dust"),
                ("Science field(s)", "Cometary science"),
                ("Format", "Archive/PDS"),
                ("Format comment", "FITS, UAX, PDS"),
                ("Size", "150 Gbyte"),
                ("Status", "Active. The site will mirror the OSIRIS data center at "
                           "the PI's institute, MPI, Germany."),
            )),
            Section("Responsibilities", (
                ("Principal investigator", "Paolo Bianchi"),
                ("Hosting institute", "CISAS University of Padua"),
            )),
        ),
        links=(ref("Keyword", "K1"), ref("Keyword", "K3"), ref("Keyword", "K4"),
               ref("Person", "P2"), ref("Institute", "I2")),
    ),
    ResourceDescriptor(
        id=rid("R2"),
        name="Solar System Data DB",
        short_description="On-line archive for planetary data",
        url="http://solar-system.mpe.mpg.de",
        long_description="On-line archive for planetary data from Italian instrument "
                         "on-board spacecrafts aimed to Solar System bodies",
        sections=(
            Section("General Info", (
                ("Resource type", "Database/Catalogue"),
                ("Related domain", "Database"),
                ("Language", "English"),
            )),
        ),
        links=(ref("Person", "P1"),),
    ),
    ResourceDescriptor(
        id=rid("R3"),
        name="Hypervelocity impact facility: a two-stages light gas accelerator",
        short_description="CISAS Hypervelocity Impact Facility is based upon a "
                          "two-stage Light Gas Gun (LGG), that can achieve a very "
                          "high shot repetition-rate (up to 10 shots/day)",
        url="http://ciss.unipd.it/file_hypervelocity.php",
        long_description="CISAS LGG can launch both solid cylinders and sabots at a "
                         "maximum velocity of 6 km/s. Different fields of application, "
                         "as example: impact experiments of planetary sciences, tests "
                         "on CFRP panels, impact tests on tethers, support for space "
                         "instrument validation and qualification tests.",
        sections=(
            Section("General Info", (
                ("Resource type", "Laboratory facility"),
                ("Related domain", "Laboratory experiments"),
                ("Language", "English"),
            )),
            Section("Resource Info", (
                ("Science field(s)", "Impact physics"),
            )),
        ),
        links=(ref("Institute", "I2"), ref("Person", "P2")),
    ),
    ResourceDescriptor(
        id=rid("R4"),
        name="Planetary atmospheres spectral library",
        short_description="Reference spectra for atmospheric species",
        url="http://spectra.example.org/library",
        long_description="Laboratory reference spectra of gases relevant to the "
                         "study of atmospheres, with temperature and pressure grids.",
        sections=(
            Section("General Info", (
                ("Resource type", "Database/Catalogue"),
                ("Language", "English"),
            )),
            Section("Resource Info", (
                ("Science field(s)", "Planetary atmospheres"),
            )),
        ),
        links=(ref("Person", "P3"),),
    ),
    ResourceDescriptor(
        id=rid("R5"),
        name="Comet dust analogue catalogue",
        short_description="Optical properties of cometary dust analogues",
        url="http://dust.example.org/analogues",
        long_description="Catalogue of laboratory analogues with the optical "
                         "constants used in planetary dust models.",
        sections=(
            Section("General Info", (
                ("Resource type", "Database/Catalogue"),
                ("Language", "English"),
            )),
        ),
        links=(ref("Keyword", "K4"),),
    ),
    ResourceDescriptor(
        id=rid("R6"),
        name="Meteor orbit database",
        short_description="Orbits from the video meteor network",
        url="http://meteors.example.org/orbits",
        long_description="Heliocentric orbits of meteoroids observed in the inner "
                         "planetary region since 1993.",
        sections=(
            Section("General Info", (
                ("Resource type", "Dataset/Data file"),
                ("Language", "English"),
            )),
        ),
        links=(),
    ),
    ResourceDescriptor(
        id=rid("R7"),
        name="Asteroid photometric catalogue",
        short_description="Photometric data of minor planets",
        url="http://asteroids.example.org/photometry",
        long_description="Lightcurves and absolute magnitudes collected from "
                         "ground-based campaigns.",
        sections=(
            Section("General Info", (
                ("Resource type", "Database/Catalogue"),
                ("Language", "English"),
            )),
        ),
        links=(),
    ),
    # The three entries below must never contain the substring 'planet'.
    ResourceDescriptor(
        id=rid("R8"),
        name="Saturn ring imaging dataset",
        short_description="Images of the ring system from the orbital tour",
        url="http://rings.example.org/images",
        long_description="Calibrated narrow-angle images of the main rings, with "
                         "geometry metadata for each exposure.",
        sections=(
            Section("General Info", (
                ("Resource type", "Dataset/Data file"),
                ("Language", "English"),
            )),
            Section("Resource Info", (
                ("Mission(s)", "Cassini"),
                ("Targets", "Rings"),
            )),
        ),
        links=(ref("Keyword", "K2"),),
    ),
    ResourceDescriptor(
        id=rid("R9"),
        name="Interstellar dust collection facility",
        short_description="Aerogel collectors for interstellar grains",
        url="http://grains.example.org/collectors",
        long_description="Collection and curation of interstellar grains captured "
                         "by aerogel panels on stratospheric flights.",
        sections=(
            Section("General Info", (
                ("Resource type", "Laboratory facility"),
                ("Language", "English"),
            )),
            Section("Resource Info", (
                ("Targets", "Interstellar medium"),
                ("Science field(s)", "Impact physics"),
            )),
        ),
        links=(ref("Institute", "I1"),),
    ),
    ResourceDescriptor(
        id=rid("R10"),
        name="Solar wind plasma archive",
        short_description="In-situ solar wind measurements",
        url="http://plasma.example.org/archive",
        long_description="Archive of solar wind ion and electron moments from "
                         "heliospheric monitors.",
        sections=(
            Section("General Info", (
                ("Resource type", "Dataset/Data file"),
                ("Language", "English"),
            )),
            Section("Resource Info", (
                ("Targets", "Solar wind"),
            )),
        ),
        links=(),
    ),
]

PEOPLE = [
    PersonDescriptor(EntryId("Person", "P1"), "Maria Rossi", ref("Institute", "I1"),
                     (("Role", "Data archive manager"), ("E-mail", "maria.rossi@example.org"))),
    PersonDescriptor(EntryId("Person", "P2"), "Paolo Bianchi", ref("Institute", "I2"),
                     (("Role", "Principal investigator"),)),
    PersonDescriptor(EntryId("Person", "P3"), "Anna Verdi", ref("Institute", "I1"),
                     (("Role", "Spectroscopist"),)),
]

KEYWORDS = [
    KeywordEntry(EntryId("Keyword", "K1"), "Rosetta", ref("KeywordType", "KT1")),
    KeywordEntry(EntryId("Keyword", "K2"), "Cassini", ref("KeywordType", "KT1")),
    KeywordEntry(EntryId("Keyword", "K3"), "Planets and comets", ref("KeywordType", "KT2")),
    KeywordEntry(EntryId("Keyword", "K4"), "Cometary science", ref("KeywordType", "KT3")),
]

GENERIC = {
    "KeywordType": [
        generic("KeywordType", "KT1", ("name", "Mission")),
        generic("KeywordType", "KT2", ("name", "Target")),
        generic("KeywordType", "KT3", ("name", "Science field")),
    ],
    "Institute": [
        generic("Institute", "I1", ("name", "INAF-IFSI Rome"), ("Country", "Italy")),
        generic("Institute", "I2", ("name", "CISAS University of Padua"), ("Country", "Italy")),
    ],
    "Node": [
        generic("Node", "N1", ("name", "Atmospheres Node"),
                ("url", "http://atmospheres.example.org")),
        generic("Node", "N2", ("name", "Interiors and Surfaces Node"),
                ("url", "http://interiors.example.org")),
        generic("Node", "N3", ("name", "Plasma Node"),
                ("url", "http://plasma-node.example.org")),
        generic("Node", "N4", ("name", "SBD Node"),
                ("url", "http://sbd.example.org")),
    ],
    "Activity": [
        generic("Activity", "A1", ("name", "Resource data model definition"),
                ("description", "Definition of the common descriptor schema")),
        generic("Activity", "A2", ("name", "Search system development"),
                ("description", "Implementation of the federated search portal")),
    ],
    "Country": [
        generic("Country", "C1", ("name", "Italy")),
        generic("Country", "C2", ("name", "France")),
        generic("Country", "C3", ("name", "Germany")),
    ],
    "N2dwg": [
        generic("N2dwg", "D1", ("name", "Small bodies and dust DWG")),
        generic("N2dwg", "D2", ("name", "Atmospheres DWG")),
    ],
    "PDSnode": [
        generic("PDSnode", "PD1", ("name", "PDS Small Bodies Node"),
                ("url", "http://pds-smallbodies.example.org")),
        generic("PDSnode", "PD2", ("name", "PDS Atmospheres Node"),
                ("url", "http://pds-atmospheres.example.org")),
    ],
    "ScienceCase": [
        generic("ScienceCase", "S1", ("name", "Cometary dust trail evolution"),
                ("description", "Trace the evolution of cometary dust trails "
                                "across apparitions")),
        generic("ScienceCase", "S2", ("name", "Impact cratering chronology"),
                ("description", "Calibrate crater counting ages with laboratory "
                                "impact experiments")),
    ],
}


def build_catalog() -> Catalog:
    collections = {"Resource": tuple(RESOURCES), "Person": tuple(PEOPLE),
                   "Keyword": tuple(KEYWORDS)}
    collections.update({name: tuple(entries) for name, entries in GENERIC.items()})
    return Catalog(collections)


def main() -> int:
    target = ROOT / "fixtures" / "catalog"
    catalog = build_catalog()

    violations = validate_catalog(catalog.collections)
    if violations:
        for violation in violations:
            print(violation, file=sys.stderr)
        return 1

    # The fig-4 count must hold before freezing the corpus.
    matching = [r.name for r in RESOURCES
                if any("planet" in t.lower() for t in all_texts(r))]
    if len(matching) != 7:
        print(f"expected exactly 7 resources matching 'planet', got {len(matching)}:",
              file=sys.stderr)
        for name in matching:
            print(f"  {name}", file=sys.stderr)
        return 1

    store_catalog(catalog, target)
    print(f"wrote {catalog.size()} entries to {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
