#pragma once

#include <array>
#include <span>
#include <vector>

#include "npsac/model.hpp"

namespace npsac {

inline constexpr std::size_t kProfileAttributes = 12;

/// Slots, in order: friend_count, follower_count, favorite_count,
/// tweet_count, list_count, account_age_months, profile_background_default,
/// profile_image_default, has_description, has_url, screen_name_length,
/// description_length. Binary slots use 1 for "condition holds".
struct ProfileVector {
  std::array<double, kProfileAttributes> values{};
};

const std::array<const char*, kProfileAttributes>& profile_attribute_names();

/// Whole calendar months from `from` to `to`, floored. Throws InvalidClock if to < from.
long months_between(UtcTime from, UtcTime to);

ProfileVector extract_attributes(const Account& account, UtcTime now);

/// Per-column min-max scaling to [0, 1]; constant columns become 0.
ViewMatrix normalize_attributes(std::span<const ProfileVector> rows, std::span<const AccountId> order);

/// extract_attributes for every account in `order`, then normalize.
ViewMatrix profile_view(std::span<const Account> accounts, std::span<const AccountId> order, UtcTime now);

}  // namespace npsac
