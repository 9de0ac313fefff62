#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "error.hpp"

namespace nfamb {

enum class ArrayKind { ULA, UCA, URA, UPCA };
enum class Mode { SimoMiso, Mimo };
enum class WindowKind { Rect, Hamming, Hann, Blackman };
enum class Provenance { Exact, Approx, BandwidthOnly, AfOnly };

inline constexpr std::array<ArrayKind, 4> all_kinds{ArrayKind::ULA, ArrayKind::UCA, ArrayKind::URA,
                                                    ArrayKind::UPCA};
inline constexpr std::array<Mode, 2> all_modes{Mode::SimoMiso, Mode::Mimo};
inline constexpr std::array<WindowKind, 4> all_windows{WindowKind::Rect, WindowKind::Hamming,
                                                       WindowKind::Hann, WindowKind::Blackman};

/// Number of array-factor powers in the ambiguity product: one aperture or two.
inline int af_power(Mode m) { return m == Mode::Mimo ? 2 : 1; }

inline std::string to_string(ArrayKind k)
{
    switch (k) {
    case ArrayKind::ULA: return "ULA";
    case ArrayKind::UCA: return "UCA";
    case ArrayKind::URA: return "URA";
    case ArrayKind::UPCA: return "UPCA";
    }
    return "?";
}

inline std::string to_string(Mode m) { return m == Mode::Mimo ? "MIMO" : "SIMO_MISO"; }

inline std::string to_string(WindowKind w)
{
    switch (w) {
    case WindowKind::Rect: return "rect";
    case WindowKind::Hamming: return "hamming";
    case WindowKind::Hann: return "hann";
    case WindowKind::Blackman: return "blackman";
    }
    return "?";
}

inline std::string to_string(Provenance p)
{
    switch (p) {
    case Provenance::Exact: return "exact";
    case Provenance::Approx: return "approx";
    case Provenance::BandwidthOnly: return "bandwidth_only";
    case Provenance::AfOnly: return "af_only";
    }
    return "?";
}

namespace detail {
inline std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}
} // namespace detail

inline ArrayKind parse_kind(std::string_view s)
{
    const auto v = detail::lower(s);
    if (v == "ula") return ArrayKind::ULA;
    if (v == "uca") return ArrayKind::UCA;
    if (v == "ura") return ArrayKind::URA;
    if (v == "upca") return ArrayKind::UPCA;
    throw InvalidInput("unknown array kind: " + std::string(s));
}

inline Mode parse_mode(std::string_view s)
{
    const auto v = detail::lower(s);
    if (v == "simo" || v == "miso" || v == "simo_miso") return Mode::SimoMiso;
    if (v == "mimo") return Mode::Mimo;
    throw InvalidInput("unknown processing mode: " + std::string(s));
}

inline WindowKind parse_window(std::string_view s)
{
    const auto v = detail::lower(s);
    if (v == "rect" || v == "rectangular") return WindowKind::Rect;
    if (v == "hamming") return WindowKind::Hamming;
    if (v == "hann" || v == "hanning") return WindowKind::Hann;
    if (v == "blackman") return WindowKind::Blackman;
    throw InvalidInput("unsupported window kind: " + std::string(s));
}

} // namespace nfamb
