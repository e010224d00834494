#pragma once

#include <stdexcept>
#include <string>

#include "oitlab/raster.hpp"

namespace oitlab {

struct SceneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened or read.
struct SceneIoError : SceneError {
    using SceneError::SceneError;
};

// Content is not valid JSON.
struct SceneJsonError : SceneError {
    using SceneError::SceneError;
};

// JSON is well-formed but missing or mistyping a schema field.
struct SceneSchemaError : SceneError {
    SceneSchemaError(const std::string& field, const std::string& what)
        : SceneError("scene schema: field '" + field + "': " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Schema is satisfied but a domain invariant is violated.
struct SceneInvariantError : SceneError {
    SceneInvariantError(const std::string& field, const std::string& what)
        : SceneError("scene invariant: field '" + field + "': " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Throws SceneInvariantError naming the offending field.
void validate_scene(const Scene& scene);

// Scene JSON schema v1 (see README). load_scene validates all invariants.
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);

bool scenes_equal(const Scene& a, const Scene& b);

}  // namespace oitlab
