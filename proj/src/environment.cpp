#include "simpleds/environment.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace simpleds {

void EnvironmentConfig::validate() const {
  reward.validate();
  noise.validate();
  if (max_turns < 1) throw ContractError("max_turns must be >= 1");
  if (!(human_confidence >= 0.0 && human_confidence <= 1.0)) {
    throw ContractError("human confidence must be in [0,1]");
  }
  if (!(simulator.p_end >= 0.0 && simulator.p_end <= 1.0)) throw ContractError("p_end must be in [0,1]");
  if (!(constraints.probability_threshold >= 0.0 && constraints.probability_threshold < 1.0)) {
    throw ContractError("probability threshold must be in [0,1)");
  }
}

DialogueEnvironment::DialogueEnvironment(std::shared_ptr<const DataPack> data, EnvironmentConfig config,
                                         Rng rng)
    : data_(std::move(data)), config_(std::move(config)), rng_(std::move(rng)) {
  config_.validate();
  for (Slot s : kSlots) {
    for (const auto& value : data_->db.values(s)) lexicon_.emplace_back(tokenize(value), s, value);
  }
  std::ranges::stable_sort(lexicon_, [](const auto& a, const auto& b) {
    return std::get<0>(a).size() > std::get<0>(b).size();
  });
}

Observation DialogueEnvironment::reset(std::optional<UserGoal> goal) {
  goal_ = goal ? std::move(*goal) : sample_goal(data_->db, rng_);
  context_ = DialogueContext{};
  pending_.reset();
  transcript_.clear();
  started_ = true;
  state_.assign(data_->vocab.size(), 0.0);
  advertise();
  last_ = Observation{state_, 0.0, false, valid_, "", ""};
  return last_;
}

void DialogueEnvironment::advertise() {
  anomaly_ = false;
  if (context_.terminal) {
    valid_.clear();
    return;
  }
  if (data_->model) {
    posterior_ = data_->model->posterior(state_);
  } else {
    posterior_.assign(kNumActions, 0.0);
  }
  ConstrainedSet set = constrained_set(posterior_, context_, config_.constraints);
  anomaly_ = set.anomaly;

  // Acts that cannot be carried out are dropped: a lookup runs on confirmed
  // values only, a result is reported once and as it came out, and a template
  // needs every value it names.
  const Bindings bindings = context_.bindings();
  auto unspeakable = [&](int a) {
    const ActType type = act_at(a).type;
    if (type == ActType::Retrieve && context_.confirmed_slots() != SlotSet::all()) return true;
    if (type == ActType::Provide &&
        (!context_.lookup_done || context_.info_provided ||
         (a == acts::kProvideKnown) != context_.retrieved.has_value())) {
      return true;
    }
    for (const auto& text : data_->templates.templates_for(a)) {
      for (const auto& name : placeholders(text)) {
        if (!bindings.contains(name)) return true;
      }
    }
    return false;
  };
  std::erase_if(set.actions, unspeakable);
  if (set.actions.empty()) {
    anomaly_ = true;
    for (int a = 0; a < static_cast<int>(kNumActions); ++a) {
      if (!unspeakable(a)) set.actions.push_back(a);
    }
  }
  valid_ = std::move(set.actions);
}

PendingTurn DialogueEnvironment::begin_turn(int action) {
  if (!started_) throw EpisodeError("not_ready", "no episode in progress; send reset first");
  if (pending_) throw EpisodeError("awaiting_user", "a user turn is pending");
  if (context_.terminal) throw EpisodeError("terminal", "episode is terminal; send reset");
  if (std::ranges::find(valid_, action) == valid_.end()) {
    throw EpisodeError("invalid_action", "action " + std::to_string(action) + " is not in the valid set");
  }

  const double dr = data_->model ? posterior_[static_cast<std::size_t>(action)] : 1.0;
  ++context_.turn;
  switch (act_at(action).type) {
    case ActType::Retrieve: {
      context_.lookup_done = true;
      const auto& f = context_.slot(Slot::food);
      const auto& p = context_.slot(Slot::price);
      const auto& a = context_.slot(Slot::area);
      context_.retrieved.reset();
      if (f && p && a) context_.retrieved = data_->db.find(f->value, p->value, a->value);
      break;
    }
    case ActType::Provide:
      context_.info_provided = true;
      break;
    case ActType::Salutation:
      if (action == acts::kClosing) context_.closed = true;
      break;
    default:
      break;
  }
  PendingTurn turn{action, verbalize(data_->templates, action, context_.bindings(), rng_),
                   expects_user_turn(act_at(action)) && action != acts::kClosing};
  pending_ = Pending{turn, dr, state_};
  return turn;
}

void DialogueEnvironment::apply_user_turn(int action, const ScoredUtterance& user) {
  const DialogueAct& act = act_at(action);
  const auto has_any = [&](const Tokens& needles) {
    return std::ranges::any_of(user.words, [&](const std::string& w) {
      return std::ranges::find(needles, w) != needles.end();
    });
  };

  struct Heard {
    Slot slot;
    std::string value;
    double confidence;
  };
  std::vector<Heard> heard;
  const auto& words = user.words;
  for (std::size_t i = 0; i < words.size();) {
    bool matched = false;
    for (const auto& [tokens, slot, value] : lexicon_) {
      if (i + tokens.size() > words.size()) continue;
      if (!std::equal(tokens.begin(), tokens.end(), words.begin() + static_cast<std::ptrdiff_t>(i))) continue;
      double sum = 0.0;
      for (std::size_t k = 0; k < tokens.size(); ++k) sum += user.scores[i + k];
      heard.push_back({slot, value, sum / static_cast<double>(tokens.size())});
      i += tokens.size();
      matched = true;
      break;
    }
    if (!matched) ++i;
  }

  if (act.type == ActType::AskFor) {
    if (has_any(data_->negate_words)) {
      context_.user_declined_more = true;
    } else if (!heard.empty()) {
      context_.clear_task();
    }
  }

  SlotSet changed;
  for (const auto& h : heard) {
    auto& fill = context_.slot(h.slot);
    if (!fill || fill->value != h.value) {
      fill = SlotFill{h.value, h.confidence, false};
      changed.insert(h.slot);
    } else {
      fill->confidence = h.confidence;
    }
  }

  if (act.type == ActType::ExpConfirm) {
    const bool yes = has_any(data_->affirm_words);
    const bool no = has_any(data_->negate_words);
    for (Slot s : act.slots().slots()) {
      if (changed.contains(s) || !context_.filled(s)) continue;
      if (yes && !no) {
        context_.slot(s)->confirmed = true;
      } else if (no) {
        context_.slot(s).reset();
      }
    }
  } else if (act.type == ActType::ImpConfirm) {
    for (Slot s : act.slots().slots()) {
      if (!changed.contains(s) && context_.filled(s)) context_.slot(s)->confirmed = true;
    }
  }
}

Observation DialogueEnvironment::finish_turn(const ScoredUtterance& user) {
  if (!pending_) throw EpisodeError("protocol", "no system turn is pending");
  if (user.words.size() != user.scores.size()) {
    throw DimensionError("finish_turn: user scores", user.words.size(), user.scores.size());
  }
  Pending pending = std::move(*pending_);
  pending_.reset();
  const int action = pending.turn.action;

  apply_user_turn(action, user);
  context_.last_system = pending.turn.system_words;
  context_.last_user = user;
  context_.terminal = context_.closed || context_.turn >= config_.max_turns;

  state_ = featurize(context_.last_system, user, data_->vocab);
  const double reward = compute_reward(context_, action, pending.dr, config_.reward);
  transcript_.push_back(TranscriptRow{std::move(pending.state_before), action, join(context_.last_system),
                                      join(user.words), reward});
  advertise();
  last_ = Observation{state_, reward, context_.terminal, valid_, join(context_.last_system), join(user.words)};
  return last_;
}

Observation DialogueEnvironment::finish_turn_with_text(const std::string& text) {
  return finish_turn(score_uniformly(tokenize(text), config_.human_confidence));
}

void DialogueEnvironment::abort() {
  pending_.reset();
  context_.terminal = true;
  valid_.clear();
  last_.terminal = true;
  last_.valid_actions.clear();
}

Observation DialogueEnvironment::step(int action) {
  PendingTurn turn = begin_turn(action);
  ScoredUtterance user;
  if (turn.expects_user) {
    UserResponse response = respond(data_->rules, goal_, action, context_.bindings(), config_.simulator,
                                    data_->db, rng_);
    if (response.new_goal) goal_ = std::move(*response.new_goal);
    user = distort(response.words, config_.noise, data_->vocab, rng_);
  }
  return finish_turn(user);
}

bool task_success(const DialogueContext& c, int max_turns) {
  return c.confirmed_slots() == SlotSet::all() && c.info_provided && c.closed && c.turn <= max_turns;
}

int expert_action(const DialogueContext& c) {
  if (c.turn == 0) return acts::kGreeting;
  if (c.user_declined_more) return acts::kClosing;
  if (c.info_provided) return acts::kAskForMore;
  if (c.lookup_done) return c.retrieved ? acts::kProvideKnown : acts::kProvideUnknown;
  if (c.confirmed_slots() == SlotSet::all()) return acts::kRetrieve;
  SlotSet unconfirmed;
  SlotSet unfilled;
  for (Slot s : kSlots) {
    if (!c.filled(s)) {
      unfilled.insert(s);
    } else if (!c.confirmed(s)) {
      unconfirmed.insert(s);
    }
  }
  if (!unconfirmed.empty()) return slot_act_index(ActType::ImpConfirm, unconfirmed);
  return slot_act_index(ActType::Request, unfilled);
}

DemonstrationCorpus generate_demonstrations(std::shared_ptr<const DataPack> data,
                                            const EnvironmentConfig& config, int dialogues, Rng rng,
                                            const std::function<void(const DialogueEnvironment&)>& on_episode) {
  DemonstrationCorpus corpus;
  corpus.vocabulary = data->vocab.words();
  DialogueEnvironment env(std::move(data), config, std::move(rng));
  for (int d = 0; d < dialogues; ++d) {
    Observation obs = env.reset();
    std::vector<DemonstrationTurn> turns;
    while (!obs.terminal) {
      const int action = expert_action(env.context());
      turns.push_back({obs.state, action});
      obs = env.step(action);
    }
    corpus.dialogues.push_back(std::move(turns));
    if (on_episode) on_episode(env);
  }
  return corpus;
}

std::string format_state(const StateVector& state) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i) out += ',';
    std::snprintf(buf, sizeof buf, "%.2g", state[i]);
    out += buf;
  }
  return out;
}

std::string format_transcript(const std::vector<TranscriptRow>& rows, const StateVector& final_state) {
  std::ostringstream out;
  for (const auto& row : rows) {
    out << format_state(row.state) << '\t' << act_name(row.action) << '\t' << row.system_text << '\t';
    if (!row.user_text.empty()) out << '[' << row.user_text << ']';
    out << '\n';
  }
  out << format_state(final_state) << "\t\t\t\n";
  return out.str();
}

}  // namespace simpleds
