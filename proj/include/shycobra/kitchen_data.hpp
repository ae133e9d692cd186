#pragma once

// Copies of data/kitchen.domain and data/kitchen_world.json so the binaries run without the data
// directory (a test keeps them in sync).

#include <string_view>

namespace shycobra::data {

inline constexpr std::string_view kKitchenDomain = R"KD(; Planar kitchen domain: symbolic parameters in brackets, continuous parameters
; (?phi config, ?p pose, ?g grasp, ?tau trajectory) under :parameters.
(define (domain kitchen)
  (:action move [?from ?to]
    :parameters (?phi ?tau)
    :constraints (CFree ?tau)
    :preconditions (and (location ?from) (location ?to) (robot-at ?from))
    :effects (and (not (robot-at ?from)) (robot-at ?to)))

  (:action open [?d ?loc]
    :preconditions (and (drawer ?d) (region-at ?d ?loc) (robot-at ?loc) (closed ?d) (handempty))
    :effects (and (opened ?d) (accessible ?d) (not (closed ?d))))

  (:action inspect [?obj ?d ?loc]
    :preconditions (and (item ?obj) (drawer ?d) (region-at ?d ?loc) (robot-at ?loc) (opened ?d) (maybe-in ?obj ?d)
                        (not (located ?obj)))
    :effects (and (located ?obj) (in ?obj ?d)))

  (:action pick [?obj ?r ?loc]
    :parameters (?phi ?p ?g ?tau)
    :constraints (CFree ?tau) (Stable[?obj ?r] ?p) (GraspH[?obj] ?g) (Kin[?obj] ?phi ?p ?g)
    :preconditions (and (item ?obj) (region-at ?r ?loc) (robot-at ?loc) (in ?obj ?r) (located ?obj) (accessible ?r)
                        (handempty) (at robot ?phi) (at ?obj ?p))
    :effects (and (holding ?obj) (not (handempty)) (not (in ?obj ?r))))

  (:action place [?obj ?r ?loc]
    :parameters (?phi ?p ?g ?tau)
    :constraints (CFreeH ?tau ?g) (Stable[?obj ?r] ?p) (GraspH[?obj] ?g) (Kin[?obj] ?phi ?p ?g)
    :preconditions (and (item ?obj) (place-target ?r) (region-at ?r ?loc) (robot-at ?loc) (holding ?obj)
                        (at robot ?phi))
    :effects (and (in ?obj ?r) (handempty) (not (holding ?obj))))

  (:action turn_on [?t ?loc]
    :preconditions (and (tap ?t) (tap-at ?t ?loc) (robot-at ?loc))
    :effects (and (water-running)))

  (:action wash [?obj ?r]
    :parameters (?p)
    :constraints (Stable[?obj ?r] ?p) (InBasin[?obj] ?p)
    :preconditions (and (item ?obj) (basin ?r) (in ?obj ?r) (water-running))
    :effects (and (clean ?obj)))

  (:action fill [?c ?t ?loc]
    :preconditions (and (container ?c) (holding ?c) (tap-at ?t ?loc) (robot-at ?loc) (water-running))
    :effects (and (filled ?c)))

  (:action pour [?c ?r ?loc]
    :preconditions (and (container ?c) (holding ?c) (filled ?c) (pan ?r) (region-at ?r ?loc) (robot-at ?loc))
    :effects (and (water-in ?r) (not (filled ?c))))

  (:action cook [?obj ?r ?loc]
    :parameters (?p)
    :constraints (Stable[?obj ?r] ?p) (InSaucepan[?obj] ?p)
    :preconditions (and (item ?obj) (pan ?r) (region-at ?r ?loc) (robot-at ?loc) (in ?obj ?r) (water-in ?r) (clean ?obj))
    :effects (and (cooked ?obj)))

  (:action serve [?obj ?r]
    :parameters (?p)
    :constraints (Stable[?obj ?r] ?p)
    :preconditions (and (item ?obj) (plate ?r) (in ?obj ?r) (cooked ?obj))
    :effects (and (served ?obj)))
)
)KD";

inline constexpr std::string_view kKitchenWorld = R"KW({
  "schema_version": 1,
  "name": "planar-kitchen",
  "bounds": [0.0, 0.0, 4.0, 3.0],
  "home": "dining",
  "stations": {
    "dining": [1.0, 2.2],
    "cabinet": [1.0, 0.8],
    "sink": [3.0, 0.8],
    "stove": [3.0, 2.2]
  },
  "obstacles": [
    {"name": "island", "rect": [1.7, 1.1, 2.3, 2.1]},
    {"name": "cabinet_pillar", "rect": [0.70, 0.0, 0.78, 0.12]},
    {"name": "sink_counter_end", "rect": [3.7, 0.0, 4.0, 0.6]}
  ],
  "regions": [
    {"name": "drawer1", "kind": "drawer", "location": "cabinet", "rect": [0.39, 0.39, 0.51, 0.51]},
    {"name": "drawer2", "kind": "drawer", "location": "cabinet", "rect": [0.94, 0.14, 1.06, 0.26]},
    {"name": "drawer3", "kind": "drawer", "location": "cabinet", "rect": [1.49, 0.39, 1.61, 0.51]},
    {"name": "basin", "kind": "basin", "location": "sink", "rect": [2.85, 0.08, 3.15, 0.32]},
    {"name": "saucepan", "kind": "saucepan", "location": "stove", "rect": [2.89, 2.69, 3.11, 2.91]},
    {"name": "cupspot", "kind": "surface", "location": "stove", "rect": [3.495, 2.445, 3.605, 2.555]},
    {"name": "plate", "kind": "plate", "location": "dining", "rect": [0.33, 2.48, 0.57, 2.72]}
  ],
  "objects": [
    {"name": "pear", "radius": 0.045, "region": "drawer1"},
    {"name": "cup", "radius": 0.04, "region": "cupspot"}
  ],
  "taps": [{"name": "tap", "location": "sink"}],
  "gripper_tolerance": {"position": 0.02, "angle": 0.35},
  "joint_error_scale": 0.02,
  "arm": {"link_lengths": [0.5, 0.5], "link_radius": 0.02, "base_radius": 0.2, "tucked": [0.0, 2.6, 0.0]}
}
)KW";

}  // namespace shycobra::data
