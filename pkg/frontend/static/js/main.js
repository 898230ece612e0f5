/**
 * Page bootstrap: pick a category, build the session and view, wire the
 * keyboard. Served as static files by `textcat serve --static`.
 */
import { TriageApi } from "./api.js";
import { TriageSession } from "./session.js";
import { TriageView } from "./ui.js";
const QUEUE_SIZE = 50;
async function boot() {
    const api = new TriageApi("");
    const select = document.getElementById("category-select");
    const mount = document.getElementById("app");
    const inventory = await api.categories();
    for (const info of inventory.categories) {
        const option = document.createElement("option");
        option.value = info.category;
        option.textContent = `${info.category} (${info.size})`;
        select.append(option);
    }
    if (inventory.categories.length === 0) {
        mount.textContent = "no categories are modeled";
        return;
    }
    let view = null;
    const open = (category) => {
        mount.textContent = "";
        const session = new TriageSession(api, category);
        view = new TriageView(mount, session, QUEUE_SIZE);
        void session.loadQueue(QUEUE_SIZE);
    };
    select.addEventListener("change", () => open(select.value));
    document.addEventListener("keydown", (event) => {
        if (event.target instanceof HTMLInputElement)
            return;
        view?.handleKey(event.key);
    });
    open(inventory.categories[0].category);
}
boot().catch((err) => {
    const mount = document.getElementById("app");
    if (mount)
        mount.textContent = `failed to start: ${err}`;
});
