"""Writes data/hand_model.json, the default 23-actuator hand.

Frame: x toward the fingers, y toward the thumb, z out of the back of the
hand. Flexion is about local +y, abduction about local +z, bones lie along
local +x.
"""
import json
import math
import sys

FINGERS = {
    # name: (mcp position, phalanx lengths)
    "index": ((0.085, 0.025, 0.0), (0.040, 0.025, 0.020)),
    "middle": ((0.088, 0.003, 0.0), (0.045, 0.028, 0.022)),
    "ring": ((0.082, -0.017, 0.0), (0.042, 0.027, 0.021)),
    "pinky": ((0.074, -0.035, 0.0), (0.033, 0.020, 0.018)),
}
THUMB = ((0.022, 0.022, -0.012), (0.045, 0.032, 0.028), (-0.8, 0.35, 0.75))

Y, Z = [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]


def actuator(name, axis, lo, hi):
    return {"name": name, "axis": axis, "limits": [lo, hi]}


def main(path):
    acts = [
        actuator("wrist_pronation", [1.0, 0.0, 0.0], -1.0, 1.0),
        actuator("wrist_deviation", Z, -0.35, 0.5),
        actuator("wrist_flexion", Y, -1.0, 1.0),
        actuator("thumb_abduction", Z, -0.5, 0.9),
        actuator("thumb_cmc", Y, -0.3, 1.0),
        actuator("thumb_mcp", Y, -0.2, 1.0),
        actuator("thumb_ip", Y, -0.3, 1.3),
    ]
    for f in FINGERS:
        acts += [
            actuator(f"{f}_abduction", Z, -0.35, 0.35),
            actuator(f"{f}_mcp", Y, -0.3, 1.5),
            actuator(f"{f}_pip", Y, -0.1, 1.75),
            actuator(f"{f}_dip", Y, -0.1, 1.4),
        ]

    links = [{"name": "palm", "parent": "world", "origin": [0, 0, 0], "rpy": [0, 0, 0],
              "actuators": ["wrist_pronation", "wrist_deviation", "wrist_flexion"]}]
    skeleton = [{"link": "palm", "point": [0, 0, 0]}]

    def chain(name, mcp, lengths, rpy, act_names):
        prox, mid, dist = lengths
        links.append({"name": f"{name}_proximal", "parent": "palm", "origin": list(mcp), "rpy": list(rpy),
                      "actuators": act_names[:2], "length": prox})
        links.append({"name": f"{name}_middle", "parent": f"{name}_proximal", "origin": [prox, 0, 0],
                      "rpy": [0, 0, 0], "actuators": [act_names[2]], "length": mid})
        links.append({"name": f"{name}_distal", "parent": f"{name}_middle", "origin": [mid, 0, 0],
                      "rpy": [0, 0, 0], "actuators": [act_names[3]], "length": dist})
        skeleton.extend([
            {"link": f"{name}_proximal", "point": [0, 0, 0]},
            {"link": f"{name}_middle", "point": [0, 0, 0]},
            {"link": f"{name}_distal", "point": [0, 0, 0]},
            {"link": f"{name}_distal", "point": [dist, 0, 0]},
        ])

    chain("thumb", THUMB[0], THUMB[1], THUMB[2], ["thumb_abduction", "thumb_cmc", "thumb_mcp", "thumb_ip"])
    for f, (mcp, lengths) in FINGERS.items():
        yaw = math.atan2(mcp[1], mcp[0])
        chain(f, mcp, lengths, (0.0, 0.0, yaw), [f"{f}_abduction", f"{f}_mcp", f"{f}_pip", f"{f}_dip"])

    doc = {
        "name": "five_finger_23dof",
        "global_ranges": [0.1, 0.1, 0.1, 0.5, 0.5, 0.5],
        "palm_center": [0.045, 0.0, -0.015],
        "actuators": acts,
        "links": links,
        "skeleton": skeleton,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/hand_model.json")
