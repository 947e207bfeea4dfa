#!/usr/bin/env python3
"""Regenerates the committed test fixtures.

Independent of the C++ code: IDX and spike-cache files are written directly
from their byte layouts.
"""
import json
import random
import struct
from pathlib import Path

HERE = Path(__file__).resolve().parent
ONE = 1 << 16


def write_idx(images, labels, img_path, lab_path):
    with open(img_path, "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))
    with open(lab_path, "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


def write_spkt(path, rows, width):
    row_bytes = (width + 7) // 8
    with open(path, "wb") as f:
        f.write(b"SPKT" + struct.pack("<III", 1, len(rows), width))
        for row in rows:
            buf = bytearray(row_bytes)
            for j, bit in enumerate(row):
                if bit:
                    buf[j // 8] |= 1 << (j % 8)
            f.write(bytes(buf))


def idx_fixture():
    rng = random.Random(20240611)
    images, labels = [], []
    for n in range(10):
        img = [0] * 784
        cx, cy = rng.randint(8, 19), rng.randint(8, 19)
        for y in range(28):
            for x in range(28):
                d2 = (x - cx) ** 2 + (y - cy) ** 2
                if d2 < 30:
                    img[y * 28 + x] = min(255, 120 + rng.randint(0, 135))
        images.append(img)
        labels.append(n % 10)
    out = HERE / "idx10"
    out.mkdir(exist_ok=True)
    write_idx(images, labels, out / "t10k-images-idx3-ubyte", out / "t10k-labels-idx1-ubyte")


def two_neuron_fixture():
    out = HERE / "two_neuron"
    (out / "trains").mkdir(parents=True, exist_ok=True)
    model = {
        "n_inputs": 2,
        "n_neurons": 2,
        "weights": [ONE, ONE // 2, ONE // 2, ONE // 4],
        "v_thresh": ONE + ONE // 2,
        "v_reset": 0,
        "exp_decay": 1,
        "w_inh": ONE // 4,
    }
    (out / "model.json").write_text(json.dumps(model, indent=2) + "\n")
    rows = [[1, 1], [1, 0], [0, 0], [1, 1], [1, 1], [0, 1], [1, 1], [0, 0]]
    write_spkt(out / "trains" / "image_00000.spkt", rows, 2)


def desk_fixture():
    rng = random.Random(8)
    n_neurons, n_inputs, n_trains, steps = 8, 16, 6, 20
    out = HERE / "desk"
    (out / "trains").mkdir(parents=True, exist_ok=True)
    model = {
        "n_inputs": n_inputs,
        "n_neurons": n_neurons,
        "weights": [rng.randrange(0, ONE) for _ in range(n_neurons * n_inputs)],
        "v_thresh": 2 * ONE,
        "v_reset": 0,
        "exp_decay": 1,
        "w_inh": ONE // 8,
    }
    (out / "model.json").write_text(json.dumps(model) + "\n")
    for t in range(n_trains):
        rows = [[1 if rng.random() < 0.3 else 0 for _ in range(n_inputs)] for _ in range(steps)]
        write_spkt(out / "trains" / f"image_{t:05d}.spkt", rows, n_inputs)


if __name__ == "__main__":
    idx_fixture()
    two_neuron_fixture()
    desk_fixture()
