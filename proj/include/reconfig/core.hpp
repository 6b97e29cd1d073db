#ifndef RECONFIG_CORE_HPP
#define RECONFIG_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reconfig {

// Error conditions raised by the library. Each maps to one named failure
// mode of an operation contract; the message carries the specifics.
enum class Errc {
    invalid_input,
    infeasible_endpoint,
    resource_cap,
    edge_set_mismatch,
    illegal_start,
    illegal_flip,
    partial_assignment,
    unsatisfied_start,
    unsatisfied_assignment,
    invalid_polarity,
    illegal_input_configuration,
    non_injective_placement,
    dependent_placement,
    not_three_regular,
    unknown_set_reference,
    not_exact_cover,
    not_maximally_split,
    wrong_start_sum,
    index_out_of_range,
    invalid_coloring,
    dimension_mismatch,
    outside_start,
    audit_failure,
    parse_error,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::invalid_input: return "InvalidInput";
        case Errc::infeasible_endpoint: return "InfeasibleEndpoint";
        case Errc::resource_cap: return "ResourceCapExceeded";
        case Errc::edge_set_mismatch: return "EdgeSetMismatch";
        case Errc::illegal_start: return "IllegalStart";
        case Errc::illegal_flip: return "IllegalFlip";
        case Errc::partial_assignment: return "PartialAssignment";
        case Errc::unsatisfied_start: return "UnsatisfiedStart";
        case Errc::unsatisfied_assignment: return "UnsatisfiedAssignment";
        case Errc::invalid_polarity: return "InvalidPolarityCombination";
        case Errc::illegal_input_configuration: return "IllegalInputConfiguration";
        case Errc::non_injective_placement: return "NonInjectivePlacement";
        case Errc::dependent_placement: return "DependentPlacement";
        case Errc::not_three_regular: return "NotThreeRegular";
        case Errc::unknown_set_reference: return "UnknownSetReference";
        case Errc::not_exact_cover: return "NotExactCover";
        case Errc::not_maximally_split: return "NotMaximallySplit";
        case Errc::wrong_start_sum: return "WrongStartSum";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::invalid_coloring: return "InvalidColoring";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::outside_start: return "OutsideStart";
        case Errc::audit_failure: return "AuditFailure";
        case Errc::parse_error: return "ParseError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

// --- canonical configuration encodings ------------------------------------
//
// Every problem model maps a configuration to a byte string used for
// hashing, lexicographic tie-breaking and DOT labels. Fixed-width models
// (orientations, assignments, 0/1 vertices) use plain bit strings over a
// sorted variable order; variable-width models (index sets, placements)
// use length-prefixed fields so distinct configurations can never collide.

inline void append_field(std::string& out, std::string_view field) {
    out += std::to_string(field.size());
    out += ':';
    out += field;
}

inline std::string encode_fields(const std::vector<std::string>& fields) {
    std::string out;
    for (const auto& f : fields) append_field(out, f);
    return out;
}

inline std::string encode_index_set(const std::vector<int>& sorted_indices) {
    std::string out;
    for (int i : sorted_indices) append_field(out, std::to_string(i));
    return out;
}

inline std::string encode_bits(const std::vector<std::uint8_t>& bits) {
    std::string out;
    out.reserve(bits.size());
    for (auto b : bits) out += b ? '1' : '0';
    return out;
}

// FNV-1a, used for content digests binding certificates to instances.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace reconfig

#endif
