#!/usr/bin/env python3
#
# Project forge - Copyright 2026 The forge Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Regenerates the committed test fixtures.

Needs RDKit. Only used offline; the C++ build and tests never call it.
Molecules come from the NCI sample and the FreeWilson example series that
ship with RDKit. Reference property values (clogp, tpsa, mol_weight) are
computed with RDKit and serve as an independent cross-check.
"""

import csv
import json
import os
import random

from rdkit import Chem, RDConfig
from rdkit.Chem import BRICS, Crippen, Descriptors, rdMolDescriptors

HERE = os.path.dirname(os.path.abspath(__file__))
NCI = os.path.join(RDConfig.RDDataDir, "NCI", "first_5K.smi")
FW = os.path.join(RDConfig.RDContribDir, "FreeWilson", "data")

ALLOWED = {"C", "N", "O", "S", "P", "F", "Cl", "Br", "I", "B"}


def aromatic_smiles(mol):
    return Chem.MolToSmiles(mol, isomericSmiles=False)


def load_nci():
    out = []
    with open(NCI) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            mol = Chem.MolFromSmiles(parts[0])
            if mol is not None:
                out.append(mol)
    return out


def is_drug_like(mol, lo=6, hi=40):
    if len(Chem.GetMolFrags(mol)) != 1:
        return False
    if not lo <= mol.GetNumHeavyAtoms() <= hi:
        return False
    for a in mol.GetAtoms():
        if a.GetSymbol() not in ALLOWED or a.GetIsotope():
            return False
        if a.GetNumRadicalElectrons():
            return False
    return True


def write_smi(path, smiles):
    with open(path, "w") as fh:
        for s in smiles:
            fh.write(s + "\n")


def main():
    rng = random.Random(2026)
    nci = load_nci()
    clean = [m for m in nci if is_drug_like(m)]
    uniq, seen = [], set()
    for m in clean:
        s = aromatic_smiles(m)
        if s not in seen:
            seen.add(s)
            uniq.append(s)
    rng.shuffle(uniq)

    corpus = uniq[:2000]
    write_smi(os.path.join(HERE, "corpus_2k.smi"), corpus)

    # Parser corpus: broader, keeps salts, charges and isotopes.
    broad = []
    for m in nci:
        if m.GetNumHeavyAtoms() > 60:
            continue
        if any(a.GetNumRadicalElectrons() for a in m.GetAtoms()):
            continue
        broad.append(Chem.MolToSmiles(m, isomericSmiles=True))
    rng.shuffle(broad)
    parser = []
    seen = set()
    for s in broad:
        if s not in seen:
            seen.add(s)
            parser.append(s)
        if len(parser) == 200:
            break
    write_smi(os.path.join(HERE, "parser_200.smi"), parser)

    panel = uniq[2000:2050]
    with open(os.path.join(HERE, "props_panel.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["smiles", "clogp", "tpsa", "tpsa_sp", "mol_weight"])
        for s in panel:
            m = Chem.MolFromSmiles(s)
            w.writerow([
                s,
                "%.4f" % Crippen.MolLogP(m),
                "%.4f" % rdMolDescriptors.CalcTPSA(m),
                "%.4f" % rdMolDescriptors.CalcTPSA(m, includeSandP=True),
                "%.4f" % Descriptors.MolWt(m),
            ])

    seeds = [s for s in uniq[2050:] if 10 <= Chem.MolFromSmiles(s).GetNumHeavyAtoms() <= 25]
    write_smi(os.path.join(HERE, "seeds_10.smi"), seeds[:10])

    write_activity(rng)
    write_external()
    write_brics(corpus[:300])


def write_activity(rng):
    acts = {}
    with open(os.path.join(FW, "CHEMBL2321810_act.csv")) as fh:
        for row in csv.DictReader(fh):
            acts[row["Name"]] = float(row["Act"])
    series = []
    with open(os.path.join(FW, "CHEMBL2321810.smi")) as fh:
        for line in fh:
            smi, name = line.split()
            m = Chem.MolFromSmiles(smi)
            if m is not None and name in acts:
                series.append((aromatic_smiles(m), acts[name]))
    series.sort()
    rng.shuffle(series)

    rows = []
    # Real series on one target.
    for smi, act in series[:110]:
        rows.append((smi, "T001", "Sodium channel protein type 9 subunit alpha", act))
    # The same chemotype relabelled onto leakage targets; must be excluded.
    for smi, act in series[110:140]:
        rows.append((smi, "T002", "Dopamine receptor DRD2", act))
    for smi, act in series[140:160]:
        rows.append((smi, "T003", "gsk-3 beta", act))
    # Synthetic substituent scan with an additive activity model.
    core = "c1ccc(cc1)C(=O)N{}"
    subs = [("C", 0.2), ("CC", 0.5), ("CCC", 0.9), ("C(C)C", 0.7), ("CO", -0.3),
            ("CCO", 0.1), ("c1ccccc1", 1.4), ("Cc1ccccc1", 1.8), ("C1CC1", 0.6),
            ("CC(F)(F)F", 1.1), ("CCN", -0.6), ("CCCl", 0.8), ("C(=O)C", -0.2),
            ("c1ccncc1", 1.0), ("CCCC", 1.2), ("C1CCCC1", 1.3), ("OC", -0.4),
            ("CS(=O)(=O)C", -1.2), ("CC#N", 0.0), ("Cc1ccco1", 0.9)]
    for i, (sub, eff) in enumerate(subs):
        smi = aromatic_smiles(Chem.MolFromSmiles(core.format(sub)))
        rows.append((smi, "T004", "Carbonic anhydrase II", round(4.6 + eff + rng.uniform(-0.1, 0.1), 2)))
    for i, (sub, eff) in enumerate(subs):
        smi = aromatic_smiles(Chem.MolFromSmiles("Oc1ccc(cc1)" + sub))
        rows.append((smi, "T005", "Acetylcholinesterase", round(5.5 + 0.8 * eff + rng.uniform(-0.1, 0.1), 2)))
    assert len(rows) == 200, len(rows)
    rng.shuffle(rows)
    with open(os.path.join(HERE, "activity_200.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["smiles", "target_id", "target_desc", "pchembl"])
        for r in rows:
            w.writerow([r[0], r[1], r[2], "%.2f" % r[3]])


def write_brics(smiles):
    # Reference BRICS pieces, written with unlabelled dummies.
    with open(os.path.join(HERE, "brics_300.tsv"), "w") as fh:
        for s in smiles:
            m = Chem.MolFromSmiles(s)
            broken = BRICS.BreakBRICSBonds(m)
            for a in broken.GetAtoms():
                if a.GetAtomicNum() == 0:
                    a.SetIsotope(0)
            pieces = sorted(Chem.MolToSmiles(broken, isomericSmiles=False).split("."))
            fh.write(s + "\t" + ".".join(pieces) + "\n")


def write_external():
    items = [
        ("Give the molecular formula of the molecule.", "C", "CH4"),
        ("Give the molecular formula of the molecule.", "CCO", "C2H6O"),
        ("Give the molecular formula of the molecule.", "c1ccccc1", "C6H6"),
        ("Count the rings in the molecule.", "C1CCC2CCCCC2C1", "2"),
        ("Count the rings in the molecule.", "c1ccc2ccccc2c1", "2"),
        ("Is the molecule charged?", "C[N+](C)(C)C", "yes"),
        ("Is the molecule charged?", "CCN", "no"),
        ("Name the functional group.", "CC(=O)O", "carboxylic acid"),
        ("Name the functional group.", "CC(=O)N", "amide"),
        ("Name the functional group.", "CC#N", "nitrile"),
    ]
    with open(os.path.join(HERE, "external.jsonl"), "w") as fh:
        for ins, smi, out in items:
            fh.write(json.dumps({
                "instruction": ins,
                "input": "<start_smiles>%s<end_smiles>" % smi,
                "output": out,
            }) + "\n")


if __name__ == "__main__":
    main()
