//
// Copyright 2025-2026 The AgriTwin Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.
//

#include "agritwin/sim/frs.hpp"

#include <algorithm>

#include "agritwin/core/digest.hpp"
#include "agritwin/core/errors.hpp"
#include "agritwin/core/geometry.hpp"
#include "agritwin/core/http_twin.hpp"
#include "agritwin/hub/twin_hub.hpp"
#include "agritwin/mediator/mediator.hpp"
#include "agritwin/vocab/ids.hpp"

namespace agritwin::sim
{
  namespace
  {
    constexpr const char *kCodeIdentity = "frs-core 1.4.2";

    nlohmann::json configJson(const RecommendationService::Config &config)
    {
      nlohmann::json targets = nlohmann::json::object();
      for (const auto &[crop, target] : config.nitrogenTargetsKgHa)
        targets[crop] = target;
      return {{"hubUrl", config.hubUrl},
              {"mediatorUrl", config.mediatorUrl},
              {"twinId", config.twinId},
              {"principal", config.principal},
              {"items", config.items},
              {"nitrogenTargetsKgHa", std::move(targets)}};
    }
  }  // namespace

  RecommendationService::RecommendationService(Config config,
                                               std::shared_ptr<vocab::Vocabulary> vocabulary,
                                               std::function<Timestamp()> now)
    : m_config(std::move(config)), m_vocabulary(std::move(vocabulary)),
      m_now(std::move(now))
  {
  }

  void RecommendationService::start()
  {
    using namespace ids;
    Submodel recommendation{"recommendation", SemanticId(kSmRecommendation), {}};
    recommendation.elements.push_back(PropertyElement{
      "lastRecommendation", SemanticId(kRecommendationNitrogen), Datatype::Decimal,
      "kg/ha", 0.0, m_now()});

    m_twin = std::make_shared<LocalTwin>(
      createShell(TwinId(m_config.twinId), TwinKind::SystemTwin,
                  {std::move(recommendation)}, m_vocabulary.get()));

    mountTwin(m_http.server(), "", m_twin);
    m_http.start(m_config.host, m_config.twinPort);

    ShellDescriptor descriptor = m_twin->describe();
    descriptor.endpoint = m_http.baseUrl();
    hub::HubClient(m_config.hubUrl).registerTwin(descriptor, {});
  }

  void RecommendationService::stop() { m_http.stop(); }

  RecommendationService::Outcome RecommendationService::recommend(
    const std::string &cropType)
  {
    // discover field-data holders by facet; anything registered later than
    // this service is found the same way
    hub::TwinQuery query;
    query.kind = TwinKind::SystemTwin;
    query.predicates.push_back(
      {SemanticId(ids::kCropType), hub::Comparator::Eq, cropType});

    std::vector<TwinId> candidates = hub::HubClient(m_config.hubUrl).query(query);
    candidates.erase(std::remove(candidates.begin(), candidates.end(), twinId()),
                     candidates.end());
    if (candidates.empty())
      throw Error(ErrorCode::NotFound,
                  "no registered twin offers field data for crop '" + cropType + "'");

    mediator::ExchangeCommand command;
    command.commandId = m_config.principal + "-cmd-" + std::to_string(++m_commandSeq);
    command.sourceTwin = candidates.front();
    command.destinationTwin = twinId();
    for (const auto &item : m_config.items)
      command.items.emplace_back(item);
    command.requestedBy = m_config.principal;

    mediator::ExchangeReceipt receipt =
      mediator::MediatorClient(m_config.mediatorUrl).submitExchange(command);
    m_lastCommandId = command.commandId;

    Outcome outcome;
    outcome.commandId = command.commandId;
    outcome.sourceTwin = command.sourceTwin.value;
    outcome.receiptStatus = toString(receipt.status);
    if (receipt.status != mediator::ReceiptStatus::Delivered)
      return outcome;

    // the delivered data is understood through the shared vocabulary alone
    PropertyElement nitrogen = m_twin->readProperty(
      joinPath(kInboxSubmodel, inboxShortName(SemanticId(ids::kSoilNitrogen))));
    PropertyElement boundaries = m_twin->readProperty(
      joinPath(kInboxSubmodel, inboxShortName(SemanticId(ids::kFieldBoundaries))));
    PropertyElement crop = m_twin->readProperty(
      joinPath(kInboxSubmodel, inboxShortName(SemanticId(ids::kCropType))));

    outcome.currentNitrogenKgHa = std::get<double>(nitrogen.value);
    outcome.fieldAreaHa = areaHectares(std::get<GeoPolygon>(boundaries.value));

    auto target = m_config.nitrogenTargetsKgHa.find(std::get<std::string>(crop.value));
    if (target == m_config.nitrogenTargetsKgHa.end())
      throw Error(ErrorCode::BadConfig,
                  "no nitrogen target for crop '" + std::get<std::string>(crop.value) +
                    "'");
    outcome.recommendationKgHa =
      std::max(0.0, target->second - outcome.currentNitrogenKgHa);

    m_twin->writeProperty(joinPath("recommendation", "lastRecommendation"),
                          outcome.recommendationKgHa, m_now());
    return outcome;
  }

  std::string RecommendationService::configDigest() const
  {
    return hexDigest(configJson(m_config).dump());
  }

  std::string RecommendationService::codeDigest() const
  {
    return hexDigest(kCodeIdentity);
  }
}  // namespace agritwin::sim
